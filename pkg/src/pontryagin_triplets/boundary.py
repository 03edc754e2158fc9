"""Boundary triplets for isometric operators.

For an isometry ``V`` in a Pontryagin space ``H`` the maximal relation is
``V^{-[*]}``, the indefinite adjoint of ``V^{-1}``.  On it the boundary form

    B(f, g) = [f', g'] - [f, g]

vanishes on the graph of ``V``.  A boundary triplet factors ``B`` through two
Pontryagin spaces ``N1``, ``N2``:

    B(f, g) = [G1 f, G1 g]_{N1} - [G2 f, G2 g]_{N2}.

All maps acting on ``V^{-[*]}`` are stored as matrices on the coordinates of
its orthonormal graph basis ``Q`` (columns in ``C^{2n}``).  The ambient
matrix of ``G`` is ``G @ Q^*``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import get_tol
from .core import PontryaginSpace, Subspace, as_matrix, null_space, orth
from .exceptions import (DimensionMismatch, InfeasibleKappa1, NonIsometric,
                         TripletError)
from .relations import LinearRelation, classify, pencil_spectrum

__all__ = [
    "IsometryInstance", "BoundaryTriplet", "TripletReport", "ExceptionalSets",
    "vstar", "boundary_form", "factor_hermitian_form", "construct_triplet",
    "verify_triplet", "extension", "kernel_extensions", "exceptional_sets",
    "classify_extension_correspondence", "inclusion_correspondence",
]


class IsometryInstance:
    """An isometric operator ``V`` in ``space``.

    Parameters
    ----------
    space : PontryaginSpace
    V : LinearRelation
        Must be an isometric operator (``mul V = {0}``).
    label : str, optional
    """

    def __init__(self, space, V, label="", tol=None):
        tol = get_tol(tol)
        if V.source.dim != space.dim or V.target.dim != space.dim:
            raise DimensionMismatch("V does not act in the given space")
        if not (V.source.same_as(space) and V.target.same_as(space)):
            V = LinearRelation(space, space, V.graph)
        if not V.is_operator():
            raise NonIsometric("V has a nontrivial multivalued part", 0.0)
        D = V.gram_difference()
        defect = float(np.linalg.norm(D, 2)) if D.size else 0.0
        scale = max(1.0, float(np.abs(space.gram).max()))
        if defect > 10 * tol * scale:
            raise NonIsometric(f"V is not isometric (Gram difference norm {defect:.3e})", defect)
        self.space = space
        self.V = V
        self.label = label

    @classmethod
    def from_map(cls, space, domain, images, label=""):
        """Instance with ``V domain[:, i] = images[:, i]``."""
        return cls(space, LinearRelation.from_pairs(domain, images, space), label)

    @property
    def dim(self):
        return self.space.dim

    def __repr__(self):
        return (f"IsometryInstance({self.label!r}, dim={self.dim}, "
                f"kappa={self.space.neg_index}, dom_dim={self.V.dim})")


def vstar(inst):
    """``V^{-[*]}``, the indefinite adjoint of ``V^{-1}``."""
    return inst.V.inverse().adjoint()


def _product_sign_gram(space):
    J = space.gram
    n = space.dim
    S = np.zeros((2 * n, 2 * n), dtype=complex)
    S[:n, :n] = -J
    S[n:, n:] = J
    return S


def boundary_form(inst, basis=None):
    """Matrix of ``[f', g'] - [f, g]`` on ``basis`` (default: graph basis of ``V^{-[*]}``)."""
    Q = vstar(inst).graph.basis if basis is None else as_matrix(basis)
    B = Q.conj().T @ _product_sign_gram(inst.space) @ Q
    return (B + B.conj().T) / 2


def factor_hermitian_form(B, kappa1=0, radical=None, tol=None):
    """Split a Hermitian form as ``G1^* J1 G1 - G2^* J2 G2``.

    Parameters
    ----------
    B : (r, r) Hermitian matrix
    kappa1 : int
        Number of negative squares required in both ``J1`` and ``J2``.
    radical : (r, d) matrix, optional
        Columns known to lie in the radical of ``B``; both factors vanish on them.

    Returns
    -------
    G1, G2 : ndarray
    J1, J2 : ndarray
        ``diag(I, -I_kappa1)``.
    """
    tol = get_tol(tol)
    r = B.shape[0]
    if radical is None or radical.shape[1] == 0:
        C = np.eye(r, dtype=complex)
    else:
        C = null_space(radical.conj().T)
    Bc = C.conj().T @ B @ C
    w, U = np.linalg.eigh((Bc + Bc.conj().T) / 2)
    scale = max(1.0, float(np.abs(B).max(initial=0.0)))
    if w.size and np.abs(w).min() <= tol * scale:
        raise TripletError("boundary form is degenerate on the quotient")
    Z = np.sqrt(np.abs(w))[:, None] * (U.conj().T @ C.conj().T)
    pos = Z[w > 0][::-1]          # strongest direction first
    neg = Z[w < 0]
    p, q = pos.shape[0], neg.shape[0]
    if p != q:
        raise TripletError(f"boundary form has signature ({p}, {q}); expected equal counts")
    if not 0 <= kappa1 <= p:
        raise InfeasibleKappa1(
            f"kappa1={kappa1} needs {kappa1} hyperbolic pairs, only {p} available")
    m = p
    k = m - kappa1
    # negative axes: N1 carries a negative B-direction, N2 a positive one
    G1 = np.vstack([pos[:k], neg[k:]])
    G2 = np.vstack([neg[:k], pos[k:]])
    signs = np.array([1.0] * k + [-1.0] * kappa1)
    return G1, G2, np.diag(signs), np.diag(signs)


def _normalize_rows(G, Q):
    """Rotate each row so the ambient functional has a real positive leading entry."""
    A = G @ Q.conj().T
    G = G.copy()
    for i in range(G.shape[0]):
        j = int(np.argmax(np.abs(A[i]) - 1e-12 * np.arange(A.shape[1])))
        if abs(A[i, j]) > 0:
            G[i] *= abs(A[i, j]) / A[i, j]
    return G


class BoundaryTriplet:
    """``(N1 (+) N2, Gamma1, Gamma2)`` for an isometry.

    ``G1``/``G2`` act on coordinates of ``vstar.graph.basis``; use
    :meth:`ambient` for matrices on ``C^{2n}``.
    """

    def __init__(self, inst, vstar_rel, N1, N2, G1, G2, kappa1):
        self.inst = inst
        self.vstar = vstar_rel
        self.N1 = N1
        self.N2 = N2
        self.G1 = np.asarray(G1, dtype=complex)
        self.G2 = np.asarray(G2, dtype=complex)
        self.kappa1 = kappa1
        r = vstar_rel.dim
        if self.G1.shape != (N1.dim, r) or self.G2.shape != (N2.dim, r):
            raise DimensionMismatch("boundary maps do not match the spaces")

    @classmethod
    def from_ambient(cls, inst, A1, A2, N1, N2, kappa1=None):
        """Triplet from matrices ``A1``, ``A2`` acting on ``C^{2n}``."""
        vs = vstar(inst)
        Q = vs.graph.basis
        A1 = as_matrix(A1, rows=N1.dim) if N1.dim else np.zeros((0, 2 * inst.dim))
        A2 = as_matrix(A2, rows=N2.dim) if N2.dim else np.zeros((0, 2 * inst.dim))
        k1 = N1.neg_index if kappa1 is None else kappa1
        return cls(inst, vs, N1, N2, A1 @ Q, A2 @ Q, k1)

    @property
    def Q(self):
        return self.vstar.graph.basis

    @property
    def space(self):
        return self.inst.space

    @property
    def n(self):
        return self.inst.dim

    def ambient(self, j):
        """Matrix of ``Gamma_j`` on ``C^{2n}`` (meaningful on ``V^{-[*]}`` only)."""
        G = self.G1 if j == 1 else self.G2
        return G @ self.Q.conj().T

    def apply(self, j, first, second):
        """``Gamma_j`` applied to the pairs ``(first[:, i], second[:, i])``."""
        return self.ambient(j) @ np.vstack([as_matrix(first), as_matrix(second)])

    def coords(self, first, second):
        return self.Q.conj().T @ np.vstack([as_matrix(first), as_matrix(second)])

    def with_maps(self, G1=None, G2=None):
        return BoundaryTriplet(self.inst, self.vstar, self.N1, self.N2,
                               self.G1 if G1 is None else G1,
                               self.G2 if G2 is None else G2, self.kappa1)

    def __repr__(self):
        return (f"BoundaryTriplet({self.inst.label!r}, dim N1={self.N1.dim}, "
                f"dim N2={self.N2.dim}, kappa1={self.kappa1})")


def construct_triplet(inst, kappa1=0, tol=None):
    """Build a boundary triplet by diagonalizing the boundary form.

    Positive directions of the form go to ``N1`` and negative ones to
    ``N2``.  For ``kappa1 > 0`` the last ``kappa1`` pairs are swapped onto
    negative axes of both spaces, which leaves the form unchanged.
    """
    vs = vstar(inst)
    Q = vs.graph.basis
    B = boundary_form(inst, Q)
    Vc = Q.conj().T @ inst.V.graph.basis
    G1, G2, J1, J2 = factor_hermitian_form(B, kappa1, Vc, tol)
    G1 = _normalize_rows(G1, Q)
    G2 = _normalize_rows(G2, Q)
    return BoundaryTriplet(inst, vs, PontryaginSpace(J1), PontryaginSpace(J2), G1, G2, kappa1)


@dataclass(frozen=True)
class TripletReport:
    green_residual: float
    rank: int
    expected_rank: int
    kernel_distance: float
    neg_indices: tuple
    kappa1: int
    tol: float

    @property
    def green_ok(self):
        return self.green_residual <= self.tol

    @property
    def surjective(self):
        return self.rank == self.expected_rank

    @property
    def kernel_ok(self):
        return self.kernel_distance <= self.tol

    @property
    def index_ok(self):
        return self.neg_indices == (self.kappa1, self.kappa1)

    @property
    def passed(self):
        return self.green_ok and self.surjective and self.kernel_ok and self.index_ok


def verify_triplet(triplet, tol=None):
    """Check Green's identity, joint surjectivity and ``ker Gamma = V``."""
    tol = get_tol(tol)
    t = triplet
    B = boundary_form(t.inst, t.Q)
    GJG = (t.G1.conj().T @ t.N1.gram @ t.G1 - t.G2.conj().T @ t.N2.gram @ t.G2)
    resid = float(np.abs(B - GJG).max(initial=0.0))
    stack = np.vstack([t.G1, t.G2])
    m = t.N1.dim + t.N2.dim
    rank = orth(stack).shape[1] if stack.size else 0
    K = Subspace(t.Q @ null_space(stack)) if stack.size else t.vstar.graph
    kd = K.distance(t.inst.V.graph) if K.dim == t.inst.V.dim else float("inf")
    return TripletReport(resid, rank, m, kd, (t.N1.neg_index, t.N2.neg_index),
                         t.kappa1, tol)


def extension(triplet, tau):
    """``V_tau = {f in V^{-[*]} : (Gamma2 f, Gamma1 f) in tau}``.

    ``tau`` is a :class:`LinearRelation` from ``N2`` to ``N1``.
    """
    t = triplet
    if tau.source.dim != t.N2.dim or tau.target.dim != t.N1.dim:
        raise DimensionMismatch("tau must be a relation from N2 to N1")
    r = t.vstar.dim
    A = np.hstack([np.vstack([t.G2, t.G1]), -tau.graph.basis])
    c = null_space(A)[:r]
    sp = t.space
    return LinearRelation(sp, sp, t.Q @ c)


def kernel_extensions(triplet):
    """``(V1, V2) = (ker Gamma1, ker Gamma2)``."""
    t = triplet
    sp = t.space
    V1 = LinearRelation(sp, sp, t.Q @ null_space(t.G1) if t.G1.size else t.Q)
    V2 = LinearRelation(sp, sp, t.Q @ null_space(t.G2) if t.G2.size else t.Q)
    return V1, V2


# points this close to the unit circle belong to neither region
CIRCLE_GAP = 1e-9


@dataclass(frozen=True)
class ExceptionalSets:
    """Exceptional points outside and inside the unit circle.

    ``Lambda1`` are the eigenvalues of ``V1`` with ``|z| > 1`` and
    ``Lambda2`` those of ``V2`` with ``|z| < 1``.
    """

    Lambda1: np.ndarray
    Lambda2: np.ndarray
    spectrum1: np.ndarray
    spectrum2: np.ndarray
    radius: float = 1e-3

    def in_D1(self, lam):
        lam = complex(lam)
        return abs(lam) > 1 + CIRCLE_GAP and not _near(lam, self.Lambda1, self.radius)

    def in_D2(self, lam):
        lam = complex(lam)
        return abs(lam) < 1 - CIRCLE_GAP and not _near(lam, self.Lambda2, self.radius)


def _near(lam, pts, radius):
    return bool(np.any(np.abs(np.asarray(pts) - lam) < radius)) if len(pts) else False


def exceptional_sets(triplet, tol=None):
    tol = get_tol(tol)
    V1, V2 = kernel_extensions(triplet)
    s1 = pencil_spectrum(V1, tol).eigenvalues
    s2 = pencil_spectrum(V2, tol).eigenvalues
    L1 = s1[np.abs(s1) > 1 + 1e-9]
    L2 = s2[np.abs(s2) < 1 - 1e-9]
    return ExceptionalSets(L1, L2, s1, s2)


_CLASS_ITEMS = ("unitary", "isometric", "coisometric", "contractive", "expansive")


def classify_extension_correspondence(triplet, tau, tol=None):
    """Compare properties of ``V_tau`` with those of ``tau``.

    Returns a dict mapping a property name to ``(value for V_tau, value for
    tau)``; the entry ``"adjoint"`` holds the distance between
    ``V_{tau^{-[*]}}`` and ``(V_tau)^{-[*]}`` instead.
    """
    tol = get_tol(tol)
    Vt = extension(triplet, tau)
    cv = classify(Vt, tol)
    ct = classify(tau, tol)
    out = {name: (getattr(cv, name), getattr(ct, name)) for name in _CLASS_ITEMS}
    lhs = extension(triplet, tau.adjoint().inverse())
    rhs = Vt.inverse().adjoint()
    out["adjoint"] = lhs.distance(rhs) if lhs.dim == rhs.dim else float("inf")
    return out


def inclusion_correspondence(triplet, tau1, tau2, tol=None):
    """``(V_tau1 <= V_tau2, tau1 <= tau2)``."""
    a = extension(triplet, tau2).contains(extension(triplet, tau1), tol)
    return a, tau2.contains(tau1, tol)
