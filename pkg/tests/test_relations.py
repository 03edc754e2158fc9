import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pontryagin_triplets import (DegeneratePencil, LinearRelation, NotInvertible,
                                 PontryaginSpace, Subspace, classify,
                                 kernel_extensions, pencil_spectrum, random_gram,
                                 random_instance, resolvent)

E1 = PontryaginSpace.euclidean(1)
E2 = PontryaginSpace.euclidean(2)
J2 = PontryaginSpace.diagonal([1, -1])


def test_parts_of_identity():
    T = LinearRelation.identity(E2)
    assert T.dom().dim == 2 and T.ran().dim == 2
    assert T.ker().dim == 0 and T.mul().dim == 0


def test_purely_multivalued():
    T = LinearRelation.from_pairs([[0.0]], [[1.0]], E1)
    assert T.dom().dim == 0
    assert T.mul().dim == 1
    assert not T.is_operator()


def test_shift2_v2_is_multivalued(shift2):
    _, V2 = kernel_extensions(shift2)
    assert V2.mul().same(Subspace.span([1, 0]))


def test_inverse_swaps_pairs():
    T = LinearRelation.from_matrix([[0, 1], [0, 0]], E2)
    inv = T.inverse()
    # ((a, b), (b, 0)) becomes ((b, 0), (a, b))
    assert inv.contains_pairs([1, 0], [0, 1])
    assert inv.contains_pairs([0, 0], [1, 0])
    assert inv.dom().same(Subspace.span([1, 0]))
    assert LinearRelation.identity(E2).inverse().same(LinearRelation.identity(E2))


def test_shift2_maximal_relation(shift2_file):
    V = shift2_file.instance.V
    W = V.inverse().adjoint()
    assert W.dim == 3
    # every ((a, b), (c, a)) belongs to it
    for a, b, c in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (2, -1j, 3)]:
        assert W.contains_pairs([a, b], [c, a])
    assert not W.contains_pairs([1, 0], [0, 0])


def test_boundary_relation_difference(shift2):
    """``tau^{-1} - M1(3)`` with ``tau = graph(4)`` is the scalar 5/36."""
    from pontryagin_triplets import weyl
    tau = LinearRelation.from_matrix([[4.0]], shift2.N2, shift2.N1)
    M = LinearRelation.from_matrix(weyl(shift2, 1, 3), shift2.N1, shift2.N2)
    S = tau.inverse() - M
    assert S.matrix()[0, 0] == pytest.approx(5 / 36)


def test_classify_examples(neutral2_file):
    W = np.array([[np.cosh(0.3), np.sinh(0.3)], [np.sinh(0.3), np.cosh(0.3)]])
    c = classify(LinearRelation.from_matrix(W, J2))
    assert c.unitary and c.isometric and c.coisometric
    c = classify(neutral2_file.instance.V)
    assert c.isometric and not c.unitary
    c = classify(LinearRelation.from_matrix([[0.5]], E1))
    assert c.contractive and not c.isometric and not c.expansive


@pytest.mark.parametrize("matrix, expected", [
    ([[0, 0], [1, 0]], [0]),
    ([[0, 4], [1, 0]], [-2, 2]),
    ([[1, 0], [0, 1]], [1]),
])
def test_pencil_spectrum_examples(matrix, expected):
    spec = pencil_spectrum(LinearRelation.from_matrix(matrix, E2))
    np.testing.assert_allclose(spec.eigenvalues, expected, atol=1e-7)
    assert not spec.infinite


def test_pencil_spectrum_reports_multivalued_part(shift2):
    _, V2 = kernel_extensions(shift2)
    assert pencil_spectrum(V2).infinite


def test_pencil_spectrum_degenerate():
    with pytest.raises(DegeneratePencil):
        pencil_spectrum(LinearRelation.full(E1))


@pytest.mark.parametrize("matrix, lam, expected", [
    ([[0, 4], [1, 0]], 3, np.array([[-3, -4], [-1, -3]]) / 5),
    ([[0, 0], [1, 0]], 3, np.array([[-3, 0], [-1, -3]]) / 9),
    ([[1, 0], [0, 1]], 0, np.eye(2)),
])
def test_resolvent_examples(matrix, lam, expected):
    R = resolvent(LinearRelation.from_matrix(matrix, E2), lam)
    np.testing.assert_allclose(R, expected, atol=1e-12)


def test_resolvent_at_eigenvalue():
    with pytest.raises(NotInvertible):
        resolvent(LinearRelation.from_matrix([[0, 4], [1, 0]], E2), 2)


def test_resolvent_of_multivalued_relation(shift2):
    """``V2`` has a multivalued part but its resolvent is still an operator."""
    _, V2 = kernel_extensions(shift2)
    R = resolvent(V2, 0.5)
    g = np.array([1.0, 2.0])
    assert V2.contains_pairs(R @ g, g + 0.5 * R @ g)


def test_sum_and_composition():
    A = LinearRelation.from_matrix([[1, 2], [3, 4]], E2)
    B = LinearRelation.from_matrix([[0, 1], [1, 0]], E2)
    np.testing.assert_allclose((A + B).matrix(), [[1, 3], [4, 4]], atol=1e-12)
    np.testing.assert_allclose(A.compose(B).matrix(), [[2, 1], [4, 3]], atol=1e-12)
    np.testing.assert_allclose(A.shift(2).matrix(), [[-1, 2], [3, 2]], atol=1e-12)


def _random_relation(rng, n, k, space):
    first = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    second = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    return LinearRelation.from_pairs(first, second, space)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 5), data=st.data(), seed=st.integers(0, 2**16))
def test_adjoint_properties(n, data, seed):
    rng = np.random.default_rng(seed)
    H = PontryaginSpace(random_gram(n, data.draw(st.integers(0, n)), rng))
    k = data.draw(st.integers(0, 2 * n))
    T = _random_relation(rng, n, k, H)
    Ts = T.adjoint()
    assert T.dim + Ts.dim == 2 * n
    assert Ts.adjoint().same(T, 1e-8)
    # inverse and adjoint commute
    assert T.inverse().adjoint().same(T.adjoint().inverse(), 1e-8)
    # the defining identity [f', g] = [f, g'] for (f, f') in T and (g, g') in Ts
    lhs = Ts.X.conj().T @ H.gram @ T.Y
    rhs = Ts.Y.conj().T @ H.gram @ T.X
    np.testing.assert_allclose(lhs, rhs, atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 5), seed=st.integers(0, 2**16))
def test_resolvent_identity(n, seed):
    """``R_l - R_m = (l - m) R_l R_m`` for an operator."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    T = LinearRelation.from_matrix(A, PontryaginSpace.euclidean(n))
    r = np.abs(np.linalg.eigvals(A)).max() + 1
    lam, mu = r * 1.5, r * 2j
    Rl, Rm = resolvent(T, lam), resolvent(T, mu)
    np.testing.assert_allclose(Rl - Rm, (lam - mu) * Rl @ Rm, atol=1e-9)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**16))
def test_random_instances_are_isometric(seed):
    inst = random_instance(4, 1, 2, degenerate=False, seed=seed)
    c = classify(inst.V)
    assert c.isometric and c.operator
