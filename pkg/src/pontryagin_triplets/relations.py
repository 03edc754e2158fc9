"""Linear relations between finite-dimensional Pontryagin spaces.

A relation ``T`` from ``H1`` to ``H2`` is a subspace of ``H1 x H2``.  The
graph is kept as an orthonormal basis ``[X; Y]`` (``X`` the first
components, ``Y`` the second); domain, range, kernel and multivalued part
are recomputed from it on demand.
"""
from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .config import get_tol
from .core import Subspace, as_matrix, null_space
from .exceptions import DegeneratePencil, DimensionMismatch, NotInvertible

__all__ = [
    "LinearRelation", "RelationClass", "PencilSpectrum",
    "parts", "inverse", "adjoint", "relation_sum", "classify",
    "pencil_spectrum", "pencil_eigenvalues", "resolvent",
]

PencilSpectrum = namedtuple("PencilSpectrum", "eigenvalues infinite")

# fixed probe points used to detect pencils that are singular everywhere
_PROBES = (0.3719 + 0.1234j, -1.77 + 0.513j)
# residual threshold when confirming a candidate eigenvalue of a
# rectangular pencil (candidates carry round-off of order cond * eps)
_EIG_CONFIRM = 1e-6


class LinearRelation:
    """Subspace of ``source x target``.

    Parameters
    ----------
    source, target : PontryaginSpace
    graph : Subspace or array_like
        Either a :class:`Subspace` of dimension ``source.dim + target.dim`` or
        a matrix whose columns span the graph.
    """

    __slots__ = ("source", "target", "graph")

    def __init__(self, source, target, graph):
        self.source = source
        self.target = target
        N = source.dim + target.dim
        if not isinstance(graph, Subspace):
            graph = Subspace.span(graph, N)
        if graph.ambient_dim != N:
            raise DimensionMismatch(
                f"graph lives in dimension {graph.ambient_dim}, expected {N}")
        self.graph = graph

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_matrix(cls, A, source, target=None):
        target = source if target is None else target
        A = as_matrix(A)
        if A.shape != (target.dim, source.dim):
            raise DimensionMismatch(f"matrix shape {A.shape} does not fit the spaces")
        return cls(source, target, np.vstack([np.eye(source.dim), A]))

    @classmethod
    def from_pairs(cls, first, second, source, target=None):
        """Span of the pairs ``(first[:, i], second[:, i])``."""
        target = source if target is None else target
        F = as_matrix(first, rows=source.dim) if np.size(first) else np.zeros((source.dim, 0))
        S = as_matrix(second, rows=target.dim) if np.size(second) else np.zeros((target.dim, 0))
        if F.shape[1] != S.shape[1]:
            raise DimensionMismatch("unequal number of first and second components")
        return cls(source, target, np.vstack([F, S]))

    @classmethod
    def zero(cls, source, target=None):
        """The trivial relation ``{(0, 0)}``."""
        target = source if target is None else target
        return cls(source, target, Subspace.zero(source.dim + target.dim))

    @classmethod
    def full(cls, source, target=None):
        target = source if target is None else target
        return cls(source, target, Subspace.full(source.dim + target.dim))

    @classmethod
    def identity(cls, space):
        return cls.from_matrix(np.eye(space.dim), space)

    # -- basic views -------------------------------------------------------
    @property
    def X(self):
        return self.graph.basis[: self.source.dim]

    @property
    def Y(self):
        return self.graph.basis[self.source.dim:]

    @property
    def dim(self):
        return self.graph.dim

    @property
    def product_space(self):
        return self.source.direct_sum(self.target)

    def dom(self):
        return Subspace.span(self.X, self.source.dim)

    def ran(self):
        return Subspace.span(self.Y, self.target.dim)

    def ker(self):
        return Subspace.span(self.X @ null_space(self.Y), self.source.dim)

    def mul(self):
        return Subspace.span(self.Y @ null_space(self.X), self.target.dim)

    def is_operator(self):
        return self.mul().dim == 0

    def is_everywhere_defined(self):
        return self.dom().dim == self.source.dim

    # -- calculus ----------------------------------------------------------
    def inverse(self):
        return LinearRelation(self.target, self.source, np.vstack([self.Y, self.X]))

    def adjoint(self):
        """Indefinite adjoint: pairs ``(g2, g1)`` with ``[f2, g2] = [f1, g1]`` on ``T``."""
        J1, J2 = self.source.gram, self.target.gram
        if self.dim == 0:
            return LinearRelation.full(self.target, self.source)
        C = np.hstack([(J2 @ self.Y).conj().T, -(J1 @ self.X).conj().T])
        return LinearRelation(self.target, self.source, Subspace(null_space(C)))

    def __add__(self, other):
        return relation_sum(self, other)

    def __neg__(self):
        return self.transform(1, 0, 0, -1)

    def __sub__(self, other):
        return relation_sum(self, -other)

    def scale(self, c):
        return self.transform(1, 0, 0, c)

    def transform(self, a, b, c, d):
        """Image of the graph under ``(f, f') -> (a f + b f', c f + d f')``.

        Mixing first and second components needs ``source`` and ``target``
        of equal dimension; the result is a relation in ``source``.
        """
        if (b != 0 or c != 0) and self.source.dim != self.target.dim:
            raise DimensionMismatch("mixing transform needs a relation in one space")
        X, Y = self.X, self.Y
        tgt = self.target if (b == 0 and c == 0) else self.source
        return LinearRelation(self.source, tgt, np.vstack([a * X + b * Y, c * X + d * Y]))

    def shift(self, lam):
        """``T - lam I``."""
        return self.transform(1, 0, -lam, 1)

    def compose(self, inner_rel):
        """``self o inner_rel``: pairs ``(f, h)`` with ``(f, g)`` in inner and ``(g, h)`` in self."""
        Xi, Yi, Xo, Yo = inner_rel.X, inner_rel.Y, self.X, self.Y
        c = null_space(np.hstack([Yi, -Xo]))
        k = inner_rel.dim
        return LinearRelation(inner_rel.source, self.target,
                              np.vstack([Xi @ c[:k], Yo @ c[k:]]))

    def restrict(self, S):
        """Restriction of ``T`` to the subspace ``S`` of the source."""
        P = np.eye(self.source.dim) - S.projector
        c = null_space(P @ self.X)
        return LinearRelation(self.source, self.target, self.graph.basis @ c)

    def intersect(self, other):
        return LinearRelation(self.source, self.target, self.graph.intersect(other.graph))

    def contains(self, other, tol=None):
        return self.graph.contains(other.graph, tol)

    def same(self, other, tol=None):
        return self.graph.same(other.graph, tol)

    def distance(self, other):
        return self.graph.distance(other.graph)

    def contains_pairs(self, first, second, tol=None):
        return self.graph.contains_vectors(np.vstack([as_matrix(first), as_matrix(second)]), tol)

    def gram_difference(self):
        """Hermitian matrix of ``[f', g'] - [f, g]`` on the graph basis."""
        X, Y = self.X, self.Y
        D = Y.conj().T @ self.target.gram @ Y - X.conj().T @ self.source.gram @ X
        return (D + D.conj().T) / 2

    def matrix(self, tol=None):
        """Matrix of ``T`` when it is an everywhere defined operator."""
        tol = get_tol(tol)
        n1 = self.source.dim
        if self.dim != n1:
            raise NotInvertible("relation is not an everywhere defined operator")
        if n1 == 0:
            return np.zeros((self.target.dim, 0), dtype=complex)
        s = np.linalg.svd(self.X, compute_uv=False)
        if s[-1] <= tol:
            raise NotInvertible("relation is not an everywhere defined operator")
        return self.Y @ np.linalg.inv(self.X)

    def __repr__(self):
        return (f"LinearRelation({self.source.dim} -> {self.target.dim}, "
                f"dim={self.dim})")


def parts(T):
    """``(dom T, ker T, ran T, mul T)``."""
    return T.dom(), T.ker(), T.ran(), T.mul()


def inverse(T):
    return T.inverse()


def adjoint(T):
    return T.adjoint()


def relation_sum(T, S):
    """Operator-like sum ``{(f, g + h) : (f, g) in T, (f, h) in S}``."""
    if T.source.dim != S.source.dim or T.target.dim != S.target.dim:
        raise DimensionMismatch("relations between different spaces")
    c = null_space(np.hstack([T.X, -S.X]))
    k = T.dim
    first = T.X @ c[:k]
    second = T.Y @ c[:k] + S.Y @ c[k:]
    return LinearRelation(T.source, T.target, np.vstack([first, second]))


@dataclass(frozen=True)
class RelationClass:
    isometric: bool
    coisometric: bool
    unitary: bool
    contractive: bool
    expansive: bool
    operator: bool
    everywhere_defined: bool


def classify(T, tol=None):
    """Metric and operator properties of a relation.

    Semidefiniteness is read off the eigenvalues of
    :meth:`LinearRelation.gram_difference`; values within ``tol`` count as
    zero, so an isometry is also reported contractive and expansive.
    """
    tol = get_tol(tol)
    scale = max(1.0, float(np.abs(T.source.gram).max()), float(np.abs(T.target.gram).max()))
    D = T.gram_difference()
    w = np.linalg.eigvalsh(D) if D.size else np.zeros(0)
    zt = tol * scale
    inv, adj = T.inverse(), T.adjoint()
    isometric = bool(np.all(np.abs(w) <= zt))
    return RelationClass(
        isometric=isometric,
        coisometric=inv.contains(adj, tol),
        unitary=inv.same(adj, tol),
        contractive=bool(np.all(w <= zt)),
        expansive=bool(np.all(w >= -zt)),
        operator=T.is_operator(),
        everywhere_defined=T.is_everywhere_defined(),
    )


def _cluster(z, radius=1e-5):
    """Merge eigenvalues closer than ``radius * (1 + |z|)``.

    A Jordan block of size ``k`` splits into a ring of radius about
    ``eps**(1/k)``; the ring centre is accurate, so clusters are averaged.
    """
    out = []
    left = list(np.asarray(z, dtype=complex))
    while left:
        c = left.pop(0)
        group = [c]
        rest = []
        for w in left:
            (group if abs(w - c) <= radius * (1 + abs(c)) else rest).append(w)
        left = rest
        out.append(np.mean(group))
    return np.array(out, dtype=complex)


def _sort_complex(z):
    z = _cluster(z)
    if z.size == 0:
        return z
    key = np.lexsort((np.round(z.imag, 9), np.round(z.real, 9)))
    return z[key]


def _sigma_min(M):
    if M.shape[1] == 0:
        return np.inf
    s = np.linalg.svd(M, compute_uv=False)
    if M.shape[0] < M.shape[1]:
        return 0.0
    return float(s[-1])


def pencil_spectrum(T, tol=None):
    """Finite eigenvalues ``{lam : ker(T - lam) != 0}`` of a relation in one space.

    The ``infinite`` flag is set when ``mul T`` is nontrivial.  Raises
    :class:`DegeneratePencil` when every complex number is an eigenvalue.
    """
    tol = get_tol(tol)
    n = T.source.dim
    if T.target.dim != n:
        raise DimensionMismatch("pencil spectrum needs a relation in one space")
    X, Y = T.X, T.Y
    k = T.dim
    infinite = T.mul().dim > 0
    if k == 0:
        return PencilSpectrum(np.zeros(0, complex), False)
    if k > n:
        raise DegeneratePencil(f"graph of dimension {k} > {n}: every point is an eigenvalue")
    return PencilSpectrum(pencil_eigenvalues(Y, X, tol), infinite)


def pencil_eigenvalues(A, B, tol=None):
    """Finite ``lam`` where ``A - lam B`` (``m x k``, ``m >= k``) loses column rank.

    Square pencils go straight to the QZ algorithm.  Tall pencils are first
    compressed by a seeded random ``k x m`` matrix and the candidates are
    kept when the smallest singular value of ``A - lam B`` is small.
    """
    tol = get_tol(tol)
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    m, k = A.shape
    if k == 0:
        return np.zeros(0, complex)
    if m < k:
        raise DegeneratePencil("wide pencil: every point is an eigenvalue")
    if all(_sigma_min(A - p * B) <= tol * max(1.0, np.abs(A).max(), np.abs(B).max())
           for p in _PROBES):
        raise DegeneratePencil("singular pencil: every point is an eigenvalue")
    if m == k:
        return _sort_complex(_finite_gen_eigs(A, B, tol))
    rng = np.random.default_rng(0)
    for _ in range(5):
        Z = rng.standard_normal((m, k)) + 1j * rng.standard_normal((m, k))
        Ac, Bc = Z.conj().T @ A, Z.conj().T @ B
        if any(_sigma_min(Ac - p * Bc) > tol for p in _PROBES):
            break
    else:
        raise DegeneratePencil("could not find a regular compression of the pencil")
    cand = _finite_gen_eigs(Ac, Bc, tol)
    scale = max(1.0, float(np.abs(A).max()), float(np.abs(B).max()))
    keep = [lam for lam in cand
            if _sigma_min(A - lam * B) <= _EIG_CONFIRM * scale * (1 + abs(lam))]
    return _sort_complex(np.array(keep, dtype=complex))


def _finite_gen_eigs(A, B, tol):
    w = sla.eigvals(A, B, homogeneous_eigvals=True)
    alpha, beta = w[0], w[1]
    finite = np.abs(beta) > tol * np.maximum(1.0, np.abs(alpha))
    return alpha[finite] / beta[finite]


def resolvent(T, lam, tol=None):
    """Matrix of ``(T - lam)^{-1}``.

    Requires ``(T - lam)^{-1}`` to be an everywhere defined operator, which in
    finite dimension happens exactly when ``dim T = dim H`` and ``lam`` is not
    an eigenvalue.  ``T`` may itself be multivalued.
    """
    tol = get_tol(tol)
    n = T.source.dim
    if T.target.dim != n:
        raise DimensionMismatch("resolvent needs a relation in one space")
    if T.dim != n:
        raise NotInvertible(f"graph dimension {T.dim} != {n}; no resolvent", lam)
    X, Y = T.X, T.Y
    M = Y - lam * X
    if n and _sigma_min(M) <= tol:
        raise NotInvertible(f"{lam} is an eigenvalue", lam)
    R = X @ np.linalg.inv(M) if n else np.zeros((0, 0), complex)
    # (R g, g + lam R g) must lie in T for every g
    check = np.vstack([R, np.eye(n) + lam * R])
    if not T.graph.contains_vectors(check, tol=max(tol, 1e-7)):
        raise NotInvertible(f"resolvent check failed at {lam}", lam)
    return R
