import numpy as np
import pytest

from pontryagin_triplets import construct_triplet, load_fixture, random_instance


@pytest.fixture(scope="session")
def shift2_file():
    return load_fixture("shift2")


@pytest.fixture(scope="session")
def neutral2_file():
    return load_fixture("neutral2")


@pytest.fixture(scope="session")
def simple_p2_file():
    return load_fixture("simple_p2")


@pytest.fixture(scope="session")
def shift2(shift2_file):
    return shift2_file.get_triplet()


@pytest.fixture(scope="session")
def neutral2(neutral2_file):
    return neutral2_file.get_triplet()


@pytest.fixture(scope="session")
def simple_p2(simple_p2_file):
    return simple_p2_file.get_triplet()


def instance_params(count, seed0=0):
    """Deterministic (dim, kappa, dom_dim, degenerate, seed) tuples; every fourth is degenerate."""
    out = []
    for s in range(count):
        dim = 2 + s % 5
        kappa = min(s % 3, dim - 1)
        dom = 1 + (s // 3) % (dim - 1)
        deg = s % 4 == 0 and kappa > 0
        out.append((dim, kappa, dom, deg, seed0 + s))
    return out


@pytest.fixture(scope="session")
def random_triplets():
    return [construct_triplet(random_instance(*p)) for p in instance_params(12, 100)]


def assert_close(A, B, tol=1e-12):
    A, B = np.asarray(A), np.asarray(B)
    assert A.shape == B.shape
    assert np.abs(A - B).max(initial=0.0) <= tol


# -- acceptance summary -------------------------------------------------------
ACCEPTANCE_LINES = {}


def record_criterion(number, title, ok, detail):
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
