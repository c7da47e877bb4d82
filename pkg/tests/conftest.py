import pytest

from cohaut.corpus import BUILTIN_LABELS, load_builtin


@pytest.fixture(scope="session")
def V():
    return load_builtin("V-ex31")


@pytest.fixture(scope="session")
def W():
    return load_builtin("W-ex32")


@pytest.fixture(scope="session")
def U1():
    return load_builtin("U1")


@pytest.fixture(scope="session")
def all_builtins():
    return [load_builtin(label) for label in BUILTIN_LABELS]
