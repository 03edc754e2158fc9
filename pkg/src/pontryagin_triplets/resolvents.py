"""Resolvents of the extensions ``V_tau`` through boundary data.

A parameter ``tau`` (a relation from ``N2`` to ``N1``) is handled either as a
relation or through its operator pair ``tau = {(K2 h, K1 h)}``, where
``[K2; K1]`` is the orthonormal graph basis of ``tau``.

Outside the circle

    R_lam(V_tau) = R_lam(V1) - lam^{-1} gamma1(lam) (tau^{-1} - M1(lam))^{-1} gamma2^#(lam),

inside

    R_lam(V_tau) = R_lam(V2) + lam^{-1} gamma2(lam) (tau - M2(lam))^{-1} gamma1^#(lam).
"""
from __future__ import annotations

import enum

import numpy as np

from .boundary import exceptional_sets, extension, kernel_extensions
from .config import get_tol
from .core import Subspace, indef_adjoint, null_space
from .exceptions import NotInvertible, PencilSingular, RegionError
from .relations import LinearRelation, pencil_eigenvalues, resolvent
from .weyl import gamma, rel_residual, sharp, weyl

__all__ = [
    "PointClass", "tau_pair", "boundary_matrix", "point_class",
    "krein_resolvent", "direct_resolvent", "sharp_consistency",
    "boundary_eigenvalues", "kernel_correspondence", "region_of",
]


class PointClass(str, enum.Enum):
    EIGENVALUE = "eigenvalue"
    REGULAR = "regular"
    UNDECIDED = "undecided"
    # injective but not onto: dim tau is too small for V_tau to have a resolvent
    SINGULAR = "singular"


def tau_pair(tau):
    """``(K1, K2)`` with ``tau = {(K2 h, K1 h)}`` and ``[K2; K1]`` orthonormal."""
    B = tau.graph.basis
    m2 = tau.source.dim
    return B[m2:], B[:m2]


def region_of(triplet, lam, ex=None):
    """1 for points outside the circle, 2 inside; raises for excluded points."""
    ex = exceptional_sets(triplet) if ex is None else ex
    lam = complex(lam)
    if lam == 0:
        raise RegionError("lam = 0 is excluded")
    if ex.in_D1(lam):
        return 1
    if ex.in_D2(lam):
        return 2
    raise RegionError(f"{lam} is on the circle or too close to an exceptional point")


def boundary_matrix(triplet, tau, lam, region=None, tol=None):
    """``K2 - M1(lam) K1`` outside the circle, ``K1 - M2(lam) K2`` inside."""
    j = region_of(triplet, lam) if region is None else region
    K1, K2 = tau_pair(tau)
    if j == 1:
        return K2 - weyl(triplet, 1, lam, tol) @ K1
    return K1 - weyl(triplet, 2, lam, tol) @ K2


def point_class(triplet, tau, lam, tol=None):
    """Classify ``lam`` for ``V_tau`` using the boundary side only.

    ``ker(tau^{-1} - M1(lam))`` (or ``ker(tau - M2(lam))``) is nontrivial
    exactly when ``K2 - M1 K1`` (resp. ``K1 - M2 K2``) has a kernel.
    """
    tol = get_tol(tol)
    A = boundary_matrix(triplet, tau, lam, tol=tol)
    m, t = A.shape
    if t == 0:
        return PointClass.SINGULAR if m else PointClass.REGULAR
    if t > m:
        return PointClass.EIGENVALUE
    s = np.linalg.svd(A, compute_uv=False)[-1]
    if s <= tol:
        return PointClass.EIGENVALUE
    if s < 100 * tol:
        return PointClass.UNDECIDED
    return PointClass.REGULAR if t == m else PointClass.SINGULAR


def direct_resolvent(triplet, tau, lam, tol=None):
    """``(V_tau - lam)^{-1}`` by inverting the relation itself."""
    return resolvent(extension(triplet, tau), lam, tol)


def _gsharp(triplet, j, lam, tol):
    N = triplet.N1 if j == 1 else triplet.N2
    return sharp(lambda z: gamma(triplet, j, z, tol), lam, N, triplet.space)


def krein_resolvent(triplet, tau, lam, form="relation", V12=None, tol=None):
    """Resolvent of ``V_tau`` at ``lam`` from the boundary data.

    Parameters
    ----------
    form : {"relation", "pair", "unitary"}
        ``"relation"`` inverts ``tau^{-1} - M1`` (or ``tau - M2``) with the
        relation calculus, so multivalued ``tau`` is fine.  ``"pair"`` uses
        ``K1 (K2 - M1 K1)^{-1}`` (resp. ``K2 (K1 - M2 K2)^{-1}``).
        ``"unitary"`` needs ``tau`` to be the graph of an operator ``U``
        and uses ``U (I - M1 U)^{-1}`` (resp. ``(U - M2)^{-1}``).

    Raises
    ------
    PencilSingular
        If the boundary operator is not boundedly invertible at ``lam``.
    """
    tol = get_tol(tol)
    t = triplet
    j = region_of(t, lam)
    V1, V2 = kernel_extensions(t) if V12 is None else V12
    base = resolvent(V1 if j == 1 else V2, lam, tol)
    M = weyl(t, j, lam, tol)
    g = gamma(t, j, lam, tol)
    gs = _gsharp(t, 2 if j == 1 else 1, lam, tol)
    if form == "relation":
        if j == 1:
            S = tau.inverse() - LinearRelation.from_matrix(M, t.N1, t.N2)
        else:
            S = tau - LinearRelation.from_matrix(M, t.N2, t.N1)
        try:
            middle = S.inverse().matrix(tol)
        except NotInvertible:
            raise PencilSingular(f"boundary relation is not invertible at {lam}", lam) from None
    elif form in ("pair", "unitary"):
        if form == "unitary":
            try:
                U = tau.matrix(tol)
            except NotInvertible:
                raise ValueError("unitary form needs tau to be the graph of an operator") from None
            K1 = U
            K2 = np.eye(t.N2.dim, dtype=complex)
        else:
            K1, K2 = tau_pair(tau)
        if j == 1:
            if form == "unitary":
                inner = np.eye(t.N2.dim) - M @ U
                left = U
            else:
                inner = K2 - M @ K1
                left = K1
        else:
            inner = K1 - M @ K2
            left = K2
        if inner.shape[0] != inner.shape[1]:
            raise PencilSingular(f"boundary operator is not square at {lam}", lam)
        sv = np.linalg.svd(inner, compute_uv=False) if inner.size else np.ones(1)
        if sv[-1] <= tol * max(1.0, sv[0]):
            raise PencilSingular(f"boundary operator is singular at {lam}", lam)
        middle = left @ np.linalg.inv(inner) if inner.size else np.zeros(
            (left.shape[0], inner.shape[0]), dtype=complex)
    else:
        raise ValueError(f"unknown form {form!r}")
    sign = -1.0 if j == 1 else 1.0
    return base + sign / lam * (g @ middle @ gs)


def sharp_consistency(triplet, tau, lam, form="relation", tol=None):
    """Compare two routes to ``R_lam(V_{tau^{-[*]}})`` for ``|lam| < 1``.

    Route one applies the inner formula to the parameter ``tau^{-[*]}``.
    Route two evaluates the outer formula for ``tau`` at ``1/conj(lam)`` and
    uses ``R_lam(V_{tau^{-[*]}}) = -(R_{1/conj(lam)}(V_tau)^{[*]} + lam I) / lam^2``.
    """
    H = triplet.space
    if not 0 < abs(lam) < 1:
        raise RegionError("need 0 < |lam| < 1")
    tau_s = tau.adjoint().inverse()
    first = krein_resolvent(triplet, tau_s, lam, "relation", tol=tol)
    R_out = krein_resolvent(triplet, tau, 1 / np.conj(lam), form, tol=tol)
    second = -(indef_adjoint(R_out, H, H) + lam * np.eye(H.dim)) / lam ** 2
    return rel_residual(first, second)


def boundary_eigenvalues(triplet, tau, region, tol=None):
    """Eigenvalues of ``V_tau`` in one region found from the boundary side.

    By a Schur complement, ``det [[A(lam), [0; K_a]], [G_b, K_b]]`` equals
    ``det A(lam) * det(K_b - M(lam) K_a)`` where ``A(lam)`` is the matrix
    inverted for the gamma-field.  The bordered matrix is linear in ``lam``,
    so its zeros come from a generalized eigenproblem.  Zeros of
    ``det A`` are exceptional points and are discarded together with
    candidates rejected by :func:`point_class`.
    """
    tol = get_tol(tol)
    t = triplet
    n = t.n
    Q = t.Q
    Qa, Qb = Q[:n], Q[n:]
    K1, K2 = tau_pair(tau)
    if region == 1:
        Ga, Gb, Ka, Kb = t.G1, t.G2, K1, K2
    else:
        Ga, Gb, Ka, Kb = t.G2, t.G1, K2, K1
    r = Q.shape[1]
    k = Ka.shape[1]
    top = np.hstack([Qb, np.zeros((n, k))])
    mid = np.hstack([Ga, -Ka])
    bot = np.hstack([Gb, -Kb])
    A = np.vstack([top, mid, bot])
    B = np.vstack([np.hstack([Qa, np.zeros((n, k))]), np.zeros((mid.shape[0] + bot.shape[0], r + k))])
    lams = pencil_eigenvalues(A, B, tol)
    ex = exceptional_sets(t)
    keep = []
    for z in lams:
        inside = ex.in_D1(z) if region == 1 else ex.in_D2(z)
        if not inside or abs(z) < 1e-6:
            continue
        if point_class(t, tau, z, tol=1e-7) == PointClass.EIGENVALUE:
            keep.append(z)
    return np.array(keep, dtype=complex)


def kernel_correspondence(triplet, tau, lam, tol=1e-7):
    """Distance between ``Gamma_j`` of the eigenvectors of ``V_tau`` at ``lam`` and
    the kernel of the boundary relation (``j = 1`` outside, ``2`` inside)."""
    t = triplet
    j = region_of(t, lam)
    Vt = extension(t, tau)
    X, Y = Vt.X, Vt.Y
    c = null_space(Y - lam * X, rtol=0.0, atol=tol)
    eig = Vt.graph.basis @ c
    left = Subspace.span(t.ambient(j) @ eig, (t.N1 if j == 1 else t.N2).dim)
    K1, K2 = tau_pair(tau)
    A = boundary_matrix(t, tau, lam, j)
    h = null_space(A, rtol=0.0, atol=tol)
    right = Subspace.span((K1 if j == 1 else K2) @ h, left.ambient_dim)
    if left.dim != right.dim:
        return float("inf")
    return left.distance(right)
