import random
from fractions import Fraction as Q

import pytest

from cohaut.algebra import Generator, Monomial, Polynomial
from cohaut.model import (
    CochainMorphism,
    ModelError,
    MorphismError,
    SullivanModel,
    compose,
    extend_tower,
    identity,
)

P = Polynomial


def mono(*factors):
    return Monomial(tuple(factors))


# --- validation -----------------------------------------------------------------


def test_example_31_model_validates(V):
    report = V.validate()
    assert report.ok
    assert [c.ok for c in report.checks] == [True, True, True, True]


def test_degree_check_fails_for_wrong_degree_image():
    x1 = Generator("x1", 10)
    y1 = Generator("y1", 41)
    m = SullivanModel([x1, y1], {"y1": P.generator(x1)}, label="bad-degree")
    report = m.validate()
    assert not report.ok
    failed = [c.name for c in report.checks if not c.ok]
    assert "differential raises degree by 1" in failed


def test_minimality_check_fails_for_linear_differential():
    x = Generator("x", 10)
    y = Generator("y", 9)
    m = SullivanModel([x, y], {"y": P.generator(x)}, label="non-minimal")
    report = m.validate()
    failed = [c.name for c in report.checks if not c.ok]
    assert "minimality (differential decomposable)" in failed


def test_d_squared_check_fails_when_violated():
    x = Generator("x", 2)
    y = Generator("y", 3)
    w = Generator("w", 4)
    # d(y) = x^2, d(w) = x y: then d(d(w)) = x * x^2 != 0
    m = SullivanModel(
        [x, y, w],
        {"y": P.monomial(mono((x, 2))), "w": P.monomial(mono((x, 1), (y, 1)))},
        label="not-closed",
    )
    report = m.validate()
    failed = [c.name for c in report.checks if not c.ok]
    assert "d ∘ d = 0 on generators" in failed


def test_u1_as_written_validates_with_vanished_term_warning(U1):
    report = U1.validate()
    assert report.ok
    assert any("x3^40" in w and "zero" in w for w in report.warnings)


# --- the differential ------------------------------------------------------------


def test_differential_of_y1_is_the_paper_value(V):
    x1, x2 = V.generator("x1"), V.generator("x2")
    assert V.d(P.generator(V.generator("y1"))) == P.monomial(mono((x1, 3), (x2, 1)))


def test_differential_of_x1_power_vanishes(V):
    x1 = V.generator("x1")
    assert V.d(P.monomial(mono((x1, 12)))).is_zero()


def test_differential_leibniz_on_y1y2(V):
    # d(y1 y2) = d(y1) y2 - y1 d(y2) = x1^3 x2 y2 - x1^2 x2^2 y1
    x1, x2 = V.generator("x1"), V.generator("x2")
    y1, y2 = V.generator("y1"), V.generator("y2")
    got = V.d(P.monomial(mono((y1, 1), (y2, 1))))
    expected = P.monomial(mono((x1, 3), (x2, 1), (y2, 1))) - P.monomial(
        mono((x1, 2), (x2, 2), (y1, 1))
    )
    assert got == expected


def test_differential_is_a_derivation(V, W):
    rng = random.Random(23)
    for m in (V, W):
        degrees = [d for d in range(2, 100) if m.basis(d)]
        for _ in range(40):
            da, db = rng.choice(degrees), rng.choice(degrees)
            a = P.monomial(rng.choice(m.basis(da)), rng.choice([1, -1, Q(1, 2)]))
            b = P.monomial(rng.choice(m.basis(db)), rng.choice([1, 2, -3]))
            sign = -1 if da % 2 else 1
            assert m.d(a * b) == m.d(a) * b + sign * (a * m.d(b))


def test_d_squared_vanishes_on_basis_spans(V, W, U1):
    for m, degrees in ((V, (52, 119, 120)), (W, (119, 120)), (U1, (120,))):
        for d in degrees:
            for monomial in m.basis(d):
                assert m.d(m.d(P.monomial(monomial))).is_zero()


def test_apply_differential_requires_homogeneous(V):
    x1, y1 = V.generator("x1"), V.generator("y1")
    with pytest.raises(ModelError):
        V.d(P.generator(x1) + P.generator(y1))


# --- truncation -----------------------------------------------------------------


def test_truncate_to_40_keeps_only_the_x_generators(V):
    t = V.truncate(40)
    assert [g.name for g in t.generators] == ["x1", "x2"]
    assert t.differential("x1").is_zero() and t.differential("x2").is_zero()


def test_truncate_to_1_is_the_empty_model(V):
    t = V.truncate(1)
    assert t.generators == ()
    assert t.basis(0) == (Monomial(()),)


def test_truncate_above_top_degree_is_identity(V):
    assert V.truncate(119) == V
    assert V.truncate(500) == V


def test_truncations_validate(V, W):
    for m in (V, W):
        for n in range(0, m.top_degree + 2):
            assert m.truncate(n).validate().ok


# --- extend_tower ----------------------------------------------------------------


def test_extend_v_by_degree_2_exponent_60_gives_w(V, W):
    built = extend_tower(V, "z", 2, 60, name="x0", label="W-ex32")
    assert built == W
    assert [g.name for g in built.generators][0] == "x0"


def test_extend_w_by_3_40_vanishes_with_warning(W, U1):
    built = extend_tower(W, "z", 3, 40, name="x3", label="U1")
    assert built == U1
    assert any("normalized to zero" in w for w in built.warnings)
    # the stored differential does not contain any x3 term
    dz = built.differential("z")
    assert all(
        all(g.name != "x3" for g, _ in monomial.factors) for monomial in dz.monomials()
    )


def test_extend_w_by_4_30_keeps_the_term(W):
    built = extend_tower(W, "z", 4, 30, name="x4")
    dz = built.differential("z")
    x4 = built.generator("x4")
    assert dz.coefficient(mono((x4, 30))) == 1
    assert built.validate().ok


def test_extend_rejects_degree_mismatch(W):
    with pytest.raises(ModelError):
        extend_tower(W, "z", 5, 20)  # 100 != 120


def test_extend_default_name_avoids_collisions(V):
    built = extend_tower(V, "z", 2, 60)  # "x2" is taken by the degree-12 generator
    new = [g for g in built.generators if g.degree == 2]
    assert len(new) == 1 and new[0].name not in {"x1", "x2"}


# --- morphisms -------------------------------------------------------------------


def test_identity_composition(V):
    f = identity(V)
    assert compose(f, f) == f


def test_compose_requires_matching_models(V, W):
    with pytest.raises(MorphismError):
        compose(identity(V), identity(W))


def test_morphism_invariants_checked_on_construction(V):
    # swapping x1 and x2 is degree-broken; scaling x1 alone breaks d(y1) = x1^3 x2
    images = {g.name: P.generator(g) for g in V.generators}
    images["x1"] = 2 * images["x1"]
    with pytest.raises(MorphismError):
        CochainMorphism(V, V, images)


def test_morphism_degree_check(V):
    images = {g.name: P.generator(g) for g in V.generators}
    images["x1"] = P.generator(V.generator("x2"))
    with pytest.raises(MorphismError):
        CochainMorphism(V, V, images)


def test_sign_automorphism_squares_to_identity(V):
    entries = {"x1": 1, "x2": -1, "y1": -1, "y2": 1, "y3": -1, "z": 1}
    images = {
        g.name: P.generator(g, entries[g.name]) for g in V.generators
    }
    f = CochainMorphism(V, V, images)
    assert compose(f, f) == identity(V)


def test_restrict_gives_stage_morphism(V):
    f = identity(V)
    g = f.restrict(45)
    assert g.source == V.truncate(45)
    assert set(g.images) == {"x1", "x2", "y1", "y2", "y3"}
