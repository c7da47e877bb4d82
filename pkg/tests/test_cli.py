import json

from cohaut.cli import main
from cohaut.dsl import parse


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out), err


def test_validate_builtin(capsys):
    code, doc, _ = run_json(capsys, "validate", "V-ex31")
    assert code == 0
    assert list(doc) == ["command", "model", "results", "warnings", "timing_ms"]
    assert doc["results"]["ok"] is True
    assert doc["timing_ms"] == 0


def test_validate_file(tmp_path, capsys):
    path = tmp_path / "demo.mcca"
    path.write_text("model demo;\ngen a : 2;\ngen c : 5;\nd c = a^3;\n")
    code, doc, _ = run_json(capsys, "validate", str(path))
    assert code == 0 and doc["results"]["ok"]


def test_validate_reports_failures_with_exit_1(tmp_path, capsys):
    path = tmp_path / "bad.mcca"
    path.write_text(
        "model bad;\ngen x : 10;\ngen y : 9;\nd y = x;\n"
    )  # degree fits but indecomposable
    code, doc, _ = run_json(capsys, "validate", str(path))
    assert code == 1
    assert doc["results"]["ok"] is False


def test_unknown_model_is_usage_error(capsys):
    code, out, err = run(capsys, "validate", "no-such-model")
    assert code == 2
    assert "neither a builtin label" in err


def test_parse_error_exit_2(tmp_path, capsys):
    path = tmp_path / "broken.mcca"
    path.write_text("model broken;\ngen a : 2;\nd a = ;\n")
    code, out, err = run(capsys, "validate", str(path))
    assert code == 2
    assert "3:" in err


def test_missing_required_flag_is_exit_2(capsys):
    assert main(["cohomology", "V-ex31"]) == 2


def test_cohomology_command(capsys):
    code, doc, _ = run_json(
        capsys, "cohomology", "V-ex31", "--degree", "42", "--truncate", "40"
    )
    assert code == 0
    assert doc["results"]["dimension"] == 1
    assert doc["results"]["representatives"] == ["x1^3*x2"]


def test_wes_command(capsys):
    code, doc, _ = run_json(capsys, "wes", "V-ex31", "--max", "50")
    assert code == 0
    assert doc["results"]["exact"] is True
    nodes = {rec["n"]: rec for rec in doc["results"]["nodes"]}
    assert nodes[41]["dim_gamma_next"] == 1


def test_coherent_accepts_the_sign_vector(capsys):
    code, doc, _ = run_json(
        capsys,
        "coherent",
        "V-ex31",
        "--xi",
        "p10=1,p12=-1,p41=-1,p43=1,p45=-1,p119=1",
    )
    assert code == 0
    assert doc["results"]["coherent"] is True


def test_coherent_obstruction_exit_1(capsys):
    code, doc, _ = run_json(
        capsys,
        "coherent",
        "V-ex31",
        "--xi",
        "p10=1,p12=1,p41=1,p43=1,p45=1,p119=2",
    )
    assert code == 1
    ob = doc["results"]["obstruction"]
    assert ob["degree"] == 119 and ob["generator"] == "z"


def test_coherent_rejects_bad_xi(capsys):
    code, out, err = run(capsys, "coherent", "V-ex31", "--xi", "garbage")
    assert code == 2


def test_coherent_accepts_matrix_file(tmp_path, capsys):
    blocks = {str(d): [[1]] for d in (10, 12, 41, 43, 45, 119)}
    path = tmp_path / "xi.json"
    path.write_text(json.dumps(blocks))
    code, doc, _ = run_json(capsys, "coherent", "V-ex31", "--xi", str(path))
    assert code == 0 and doc["results"]["coherent"] is True


def test_solve_v(capsys):
    code, doc, _ = run_json(capsys, "solve", "V-ex31")
    assert code == 0
    res = doc["results"]
    assert res["morphisms"] == 3
    assert res["automorphisms"] == 2
    assert res["group"]["order"] == 2
    assert res["group"]["torsion_rank"] == 1
    assert res["lift_verified"]["failed"] == 0


def test_solve_u1_infinite_with_warning(capsys):
    code, doc, _ = run_json(capsys, "solve", "U1")
    assert code == 0
    res = doc["results"]
    assert res["morphisms"] == "infinite"
    assert res["family"]["free_rank"] == 1
    assert any("x3^40" in w for w in doc["warnings"])


def test_iso_command(capsys):
    code, doc, _ = run_json(capsys, "iso", "V-ex31", "W-ex32")
    assert code == 0
    assert doc["results"]["isomorphic"] is False


def test_extend_command_produces_u1(capsys, U1):
    code, doc, _ = run_json(
        capsys, "extend", "W-ex32", "--gen", "3:40:x3", "--closing", "z"
    )
    assert code == 0
    rebuilt = parse(doc["results"]["source"])
    assert rebuilt == U1
    assert any("normalized to zero" in w for w in doc["warnings"])


def test_extend_degree_mismatch_exit_1(capsys):
    code, out, err = run(capsys, "extend", "W-ex32", "--gen", "5:20")
    assert code == 1


def test_reproduce_ex31(capsys):
    code, doc, _ = run_json(capsys, "reproduce", "ex31")
    assert code == 0
    assert doc["results"]["ok"] is True
    assert all(c["ok"] for c in doc["results"]["ex31"]["checks"])


def test_json_outputs_are_byte_identical_across_runs(capsys):
    _, out1, _ = run(capsys, "solve", "W-ex32", "--json")
    _, out2, _ = run(capsys, "solve", "W-ex32", "--json")
    assert out1 == out2
    _, out3, _ = run(capsys, "cohomology", "V-ex31", "--degree", "120", "--truncate", "118", "--json")
    _, out4, _ = run(capsys, "cohomology", "V-ex31", "--degree", "120", "--truncate", "118", "--json")
    assert out3 == out4
