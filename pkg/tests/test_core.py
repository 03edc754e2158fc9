import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pontryagin_triplets import (DimensionMismatch, InvalidGram, PontryaginSpace,
                                 Subspace, indef_adjoint, inner, ortho_companion,
                                 random_gram, subspace_signature)


def test_inner_product_values():
    E = PontryaginSpace.euclidean(2)
    J = PontryaginSpace.diagonal([1, -1])
    assert inner(E, [1, 0], [1, 0]) == 1
    assert inner(J, [1, 1], [1, 1]) == 0
    r2 = np.sqrt(2)
    assert inner(J, [r2, 1], [r2, 1]) == pytest.approx(1)


def test_inner_is_conjugate_linear_in_second_argument():
    E = PontryaginSpace.euclidean(1)
    assert inner(E, [1], [1j]) == pytest.approx(-1j)


@pytest.mark.parametrize("gram, kappa", [
    (np.eye(3), 0),
    (np.diag([1.0, -1.0]), 1),
    (np.array([[0.0, 1.0], [1.0, 0.0]]), 1),
])
def test_negative_index(gram, kappa):
    assert PontryaginSpace(gram).neg_index == kappa


def test_invalid_grams():
    with pytest.raises(InvalidGram):
        PontryaginSpace([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(InvalidGram):
        PontryaginSpace(np.diag([1.0, 0.0]))
    with pytest.raises(InvalidGram):
        PontryaginSpace(np.ones((2, 3)))


def test_signatures():
    E = PontryaginSpace.euclidean(2)
    J = PontryaginSpace.diagonal([1, -1])
    assert subspace_signature(E, Subspace.span([1, 0])) == (1, 0, 0)
    assert subspace_signature(J, Subspace.span([1, 1])) == (0, 0, 1)
    assert subspace_signature(J, Subspace.full(2)) == (1, 1, 0)


def test_ortho_companion():
    E = PontryaginSpace.euclidean(2)
    J = PontryaginSpace.diagonal([1, -1])
    assert ortho_companion(E, Subspace.span([1, 0])).same(Subspace.span([0, 1]))
    neutral = Subspace.span([1, 1])
    assert ortho_companion(J, neutral).same(neutral)


def test_indefinite_adjoint_values():
    E = PontryaginSpace.euclidean(2)
    J = PontryaginSpace.diagonal([1, -1])
    A = np.array([[1, 2j], [3, 4]])
    np.testing.assert_allclose(indef_adjoint(A, E, E), A.conj().T)
    np.testing.assert_allclose(indef_adjoint([[0, 1], [0, 0]], J, J), [[0, 0], [-1, 0]])
    np.testing.assert_allclose(indef_adjoint(J.gram, J, J), J.gram)


def test_indefinite_adjoint_shape_check():
    with pytest.raises(DimensionMismatch):
        indef_adjoint(np.ones((2, 3)), PontryaginSpace.euclidean(2), PontryaginSpace.euclidean(2))


def test_span_is_basis_independent():
    a = Subspace.span(np.array([[1, 1], [0, 1], [0, 0]]))
    b = Subspace.span(np.array([[2, 0], [1, 3], [0, 0]]))
    assert a.same(b)
    assert a.dim == 2
    assert not a.same(Subspace.span([0, 0, 1]))


def test_intersection_and_sum():
    a = Subspace.span(np.array([[1, 0], [0, 1], [0, 0]]))
    b = Subspace.span(np.array([[0, 0], [1, 0], [0, 1]]))
    assert a.intersect(b).same(Subspace.span([0, 1, 0]))
    assert (a + b).dim == 3


def test_canonical_space():
    S = PontryaginSpace.canonical(4, 2)
    np.testing.assert_array_equal(np.diag(S.gram), [1, 1, -1, -1])
    assert S.direct_sum(PontryaginSpace.euclidean(1)).neg_index == 2


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 6), data=st.data(), seed=st.integers(0, 2**16))
def test_adjoint_defining_property(n, data, seed):
    kappa = data.draw(st.integers(0, n))
    m = data.draw(st.integers(1, 5))
    rng = np.random.default_rng(seed)
    H = PontryaginSpace(random_gram(n, kappa, rng))
    K = PontryaginSpace(random_gram(m, data.draw(st.integers(0, m)), rng))
    A = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    y = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    As = indef_adjoint(A, H, K)
    lhs = inner(K, A @ x, y)
    rhs = inner(H, x, As @ y)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))
    np.testing.assert_allclose(indef_adjoint(As, K, H), A, atol=1e-8)
    assert H.neg_index == kappa


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 6), seed=st.integers(0, 2**16))
def test_companion_of_companion(n, seed):
    rng = np.random.default_rng(seed)
    H = PontryaginSpace(random_gram(n, int(rng.integers(0, n + 1)), rng))
    S = Subspace.span(rng.standard_normal((n, int(rng.integers(1, n)))))
    C = ortho_companion(H, S)
    assert C.dim == n - S.dim
    assert ortho_companion(H, C).same(S, 1e-8)
