"""Finite-dimensional Pontryagin spaces and their subspaces.

A Pontryagin space here is ``C^n`` together with an invertible Hermitian
Gram matrix ``J``; the indefinite product is ``[x, y] = y^* J x``.  The
negative index is the number of negative eigenvalues of ``J``.

Subspaces are stored as Euclidean-orthonormal bases obtained from an SVD of
any spanning set, so two subspaces with the same span compare equal no
matter which vectors produced them.
"""
from __future__ import annotations

from collections import namedtuple

import numpy as np

from .config import get_tol
from .exceptions import DimensionMismatch, InvalidGram

__all__ = [
    "PontryaginSpace", "Subspace", "Signature",
    "inner", "neg_index", "subspace_signature", "ortho_companion",
    "indef_adjoint", "orth", "null_space", "as_matrix",
]

# absolute floor under the relative rank threshold; stops pure round-off
# from being promoted to a direction
RANK_FLOOR = 1e-12
RANK_RTOL = 1e-9


def as_matrix(a, rows=None):
    """Return ``a`` as a 2-D complex array (a 1-D input becomes a column)."""
    a = np.asarray(a, dtype=complex)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {a.shape}")
    if rows is not None and a.shape[0] != rows:
        raise DimensionMismatch(f"expected {rows} rows, got {a.shape[0]}")
    return a


def orth(A, rtol=RANK_RTOL, atol=RANK_FLOOR):
    """Orthonormal basis of the column space of ``A``."""
    A = as_matrix(A)
    if A.size == 0:
        return np.zeros((A.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(A, full_matrices=False)
    if s.size == 0:
        return np.zeros((A.shape[0], 0), dtype=complex)
    r = int(np.sum(s > max(rtol * s[0], atol)))
    return u[:, :r]


def null_space(A, rtol=RANK_RTOL, atol=RANK_FLOOR):
    """Orthonormal basis of the right null space of ``A``.

    Singular values below ``max(rtol * s_max, atol)`` count as zero.
    """
    A = as_matrix(A)
    m, n = A.shape
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    if m == 0:
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    smax = s[0] if s.size else 0.0
    r = int(np.sum(s > max(rtol * smax, atol)))
    return vh[r:].conj().T


def _hermitize(M):
    return (M + M.conj().T) / 2


Signature = namedtuple("Signature", "pos neg iso")
Signature.__doc__ = "Inertia of a Hermitian form restricted to a subspace."


class PontryaginSpace:
    """``C^n`` with an invertible Hermitian Gram matrix.

    Parameters
    ----------
    gram : array_like
        ``n x n`` Hermitian invertible matrix ``J``.
    tol : float, optional
        Tolerance for the Hermitian and invertibility checks.
    """

    def __init__(self, gram, tol=None):
        tol = get_tol(tol)
        J = as_matrix(gram)
        if J.shape[0] != J.shape[1]:
            raise InvalidGram(f"Gram matrix must be square, got {J.shape}")
        scale = max(1.0, float(np.abs(J).max(initial=0.0)))
        if np.abs(J - J.conj().T).max(initial=0.0) > tol * scale:
            raise InvalidGram("Gram matrix is not Hermitian")
        J = _hermitize(J)
        w = np.linalg.eigvalsh(J) if J.size else np.zeros(0)
        if w.size and np.abs(w).min() <= tol * scale:
            raise InvalidGram("Gram matrix is singular")
        self._gram = J
        self._gram.setflags(write=False)
        self._neg = int(np.sum(w < 0))
        self._gram_inv = np.linalg.inv(J) if J.size else J.copy()
        self._gram_inv.setflags(write=False)

    @classmethod
    def euclidean(cls, n):
        return cls(np.eye(n))

    @classmethod
    def diagonal(cls, signs):
        return cls(np.diag(np.asarray(signs, dtype=float)))

    @classmethod
    def canonical(cls, n, kappa):
        """``diag(I_{n-kappa}, -I_kappa)``."""
        if not 0 <= kappa <= n:
            raise DimensionMismatch(f"negative index {kappa} impossible in dimension {n}")
        return cls.diagonal([1.0] * (n - kappa) + [-1.0] * kappa)

    @property
    def dim(self):
        return self._gram.shape[0]

    @property
    def gram(self):
        return self._gram

    @property
    def gram_inv(self):
        return self._gram_inv

    @property
    def neg_index(self):
        return self._neg

    def inner(self, x, y):
        return inner(self, x, y)

    def direct_sum(self, other):
        """Orthogonal sum with block-diagonal Gram ``diag(self, other)``."""
        n, m = self.dim, other.dim
        J = np.zeros((n + m, n + m), dtype=complex)
        J[:n, :n] = self.gram
        J[n:, n:] = other.gram
        return PontryaginSpace(J)

    def same_as(self, other, tol=None):
        tol = get_tol(tol)
        return self.dim == other.dim and np.allclose(self.gram, other.gram, atol=tol, rtol=0)

    def __repr__(self):
        return f"PontryaginSpace(dim={self.dim}, neg_index={self.neg_index})"


def inner(space, x, y):
    """Indefinite product ``[x, y] = y^* J x``."""
    x = np.asarray(x, dtype=complex).ravel()
    y = np.asarray(y, dtype=complex).ravel()
    if x.size != space.dim or y.size != space.dim:
        raise DimensionMismatch(
            f"vectors of length {x.size}, {y.size} in a space of dimension {space.dim}")
    return complex(y.conj() @ space.gram @ x)


def neg_index(space):
    return space.neg_index


class Subspace:
    """Column span of a matrix, stored through an orthonormal basis.

    Use :meth:`span` to build one from arbitrary spanning vectors.
    """

    __slots__ = ("_basis", "_proj")

    def __init__(self, basis):
        B = as_matrix(basis)
        self._basis = B
        self._basis.setflags(write=False)
        self._proj = None

    @classmethod
    def span(cls, vectors, ambient_dim=None):
        V = as_matrix(vectors) if np.size(vectors) else np.zeros((ambient_dim or 0, 0), complex)
        if ambient_dim is not None and V.shape[0] != ambient_dim:
            if V.size == 0:
                V = np.zeros((ambient_dim, 0), complex)
            else:
                raise DimensionMismatch("spanning vectors have the wrong length")
        return cls(orth(V))

    @classmethod
    def zero(cls, n):
        return cls(np.zeros((n, 0), dtype=complex))

    @classmethod
    def full(cls, n):
        return cls(np.eye(n, dtype=complex))

    @property
    def basis(self):
        return self._basis

    @property
    def dim(self):
        return self._basis.shape[1]

    @property
    def ambient_dim(self):
        return self._basis.shape[0]

    @property
    def projector(self):
        if self._proj is None:
            self._proj = self._basis @ self._basis.conj().T
            self._proj.setflags(write=False)
        return self._proj

    def distance(self, other):
        """Largest entry of the difference of the orthogonal projectors."""
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("subspaces live in different spaces")
        return float(np.abs(self.projector - other.projector).max(initial=0.0))

    def same(self, other, tol=None):
        return self.dim == other.dim and self.distance(other) <= get_tol(tol)

    def contains(self, other, tol=None):
        """True if ``other`` is a subspace of ``self``."""
        if other.dim == 0:
            return True
        resid = other.basis - self.projector @ other.basis
        return float(np.abs(resid).max()) <= get_tol(tol)

    def contains_vectors(self, vectors, tol=None):
        V = as_matrix(vectors, rows=self.ambient_dim)
        if V.size == 0:
            return True
        resid = V - self.projector @ V
        scale = max(1.0, float(np.abs(V).max()))
        return float(np.abs(resid).max()) <= get_tol(tol) * scale

    def __add__(self, other):
        return Subspace.span(np.hstack([self.basis, other.basis]), self.ambient_dim)

    def intersect(self, other):
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim)
        c = null_space(np.hstack([self.basis, -other.basis]), rtol=0.0, atol=1e-7)
        return Subspace.span(self.basis @ c[: self.dim], self.ambient_dim)

    def euclidean_complement(self):
        return Subspace(null_space(self.basis.conj().T))

    def coordinates(self, vectors):
        """Coefficients of ``vectors`` in the orthonormal basis."""
        return self._basis.conj().T @ as_matrix(vectors, rows=self.ambient_dim)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"


def subspace_signature(space, S, tol=None):
    """Inertia of ``[., .]`` restricted to ``S``."""
    tol = get_tol(tol)
    if S.dim == 0:
        return Signature(0, 0, 0)
    G = _hermitize(S.basis.conj().T @ space.gram @ S.basis)
    w = np.linalg.eigvalsh(G)
    scale = max(1.0, float(np.abs(space.gram).max()))
    pos = int(np.sum(w > tol * scale))
    neg = int(np.sum(w < -tol * scale))
    return Signature(pos, neg, S.dim - pos - neg)


def ortho_companion(space, S):
    """``S^{[perp]} = {y : [x, y] = 0 for all x in S}``."""
    if S.ambient_dim != space.dim:
        raise DimensionMismatch("subspace does not belong to this space")
    if S.dim == 0:
        return Subspace.full(space.dim)
    return Subspace(null_space((space.gram @ S.basis).conj().T))


def indef_adjoint(A, source, target):
    """Matrix of the indefinite adjoint ``A^{[*]} = J_source^{-1} A^* J_target``.

    ``A`` maps ``source`` into ``target``; the result maps ``target`` into
    ``source`` and satisfies ``[A x, y]_target = [x, A^{[*]} y]_source``.
    """
    A = as_matrix(A)
    if A.shape != (target.dim, source.dim):
        raise DimensionMismatch(
            f"matrix of shape {A.shape} cannot map dim {source.dim} to dim {target.dim}")
    return source.gram_inv @ A.conj().T @ target.gram
