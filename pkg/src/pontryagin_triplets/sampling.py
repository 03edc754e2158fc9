"""Seeded random Gram matrices, J-unitaries and isometry instances."""
from __future__ import annotations

import numpy as np

from .core import PontryaginSpace, Subspace, as_matrix, ortho_companion
from .exceptions import DimensionMismatch, InfeasibleKappa1

__all__ = [
    "random_gram", "canonical_factor", "random_j_unitary", "random_unitary_in",
    "random_instance", "random_hermitian", "neutral_vector",
]


def _cnormal(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_hermitian(n, rng, scale=1.0):
    A = _cnormal(rng, n, n)
    return scale * (A + A.conj().T) / 2


def random_gram(n, kappa, rng):
    """``Q diag(+-d) Q^*`` with ``kappa`` negative entries, ``d`` in ``[0.5, 2]``."""
    if not 0 <= kappa <= n:
        raise DimensionMismatch(f"negative index {kappa} impossible in dimension {n}")
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    Q, _ = np.linalg.qr(_cnormal(rng, n, n))
    d = rng.uniform(0.5, 2.0, n)
    d[n - kappa:] *= -1
    return (Q * d) @ Q.conj().T


def canonical_factor(J):
    """``(L, D)`` with ``J = L^* D L``, ``D`` diagonal of signs (negatives first)."""
    J = as_matrix(J)
    if J.size == 0:
        return np.zeros((0, 0), complex), np.zeros((0, 0))
    w, Q = np.linalg.eigh((J + J.conj().T) / 2)
    L = np.sqrt(np.abs(w))[:, None] * Q.conj().T
    return L, np.diag(np.sign(w))


def random_j_unitary(D, rng, scale=1.0):
    """Cayley transform ``(I - K)^{-1}(I + K)`` of ``K = i D S``, ``S`` Hermitian.

    ``K`` is ``D``-skew-adjoint, so the result satisfies ``W^* D W = D``.
    """
    n = D.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    S = random_hermitian(n, rng, scale)
    K = 1j * np.linalg.solve(D, S)
    I = np.eye(n)
    return np.linalg.solve(I - K, I + K)


def random_unitary_in(space, rng, scale=1.0):
    """A unitary operator of the Pontryagin space ``space``."""
    L, D = canonical_factor(space.gram)
    W = random_j_unitary(D, rng, scale)
    return np.linalg.solve(L, W @ L) if space.dim else W


def neutral_vector(space, rng):
    """A random nonzero vector ``x`` with ``[x, x] = 0`` (needs ``0 < kappa < dim``)."""
    n, k = space.dim, space.neg_index
    if k == 0 or k == n:
        raise InfeasibleKappa1("neutral vectors need an indefinite space")
    L, D = canonical_factor(space.gram)
    d = np.diag(D)
    p = np.where(d > 0, _cnormal(rng, n), 0)
    q = np.where(d < 0, _cnormal(rng, n), 0)
    p /= np.linalg.norm(p)
    q /= np.linalg.norm(q)
    theta = rng.uniform(0, 2 * np.pi)
    y = p + np.exp(1j * theta) * q          # neutral for D
    return np.linalg.solve(L, y)


def random_instance(dim, kappa, dom_dim, degenerate=False, seed=0, label=None):
    """Isometry ``V = W | D`` for a random J-unitary ``W`` and subspace ``D``.

    With ``degenerate=True`` the domain contains a neutral vector ``x0`` and
    is built inside ``x0^{[perp]}``, so the form restricted to it has an
    isotropic part.
    """
    from .boundary import IsometryInstance
    from .relations import LinearRelation

    if not 0 <= dom_dim <= dim or not 0 <= kappa <= dim:
        raise DimensionMismatch("need 0 <= dom_dim <= dim and 0 <= kappa <= dim")
    rng = np.random.default_rng(seed)
    space = PontryaginSpace(random_gram(dim, kappa, rng))
    W = random_unitary_in(space, rng)
    if degenerate:
        if dom_dim == 0:
            raise InfeasibleKappa1("a degenerate domain needs dom_dim >= 1")
        x0 = neutral_vector(space, rng)
        comp = ortho_companion(space, Subspace.span(x0, dim)).basis
        extra = comp @ _cnormal(rng, comp.shape[1], dom_dim - 1) if dom_dim > 1 \
            else np.zeros((dim, 0))
        dom = np.hstack([x0.reshape(-1, 1), extra])
    else:
        dom = _cnormal(rng, dim, dom_dim)
    space_label = label or f"random-{dim}-{kappa}-{dom_dim}{'-deg' if degenerate else ''}-{seed}"
    V = LinearRelation.from_pairs(dom, W @ dom, space)
    return IsometryInstance(space, V, label=space_label)
