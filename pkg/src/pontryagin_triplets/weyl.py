"""Defect subspaces, gamma-fields and Weyl functions.

For ``lam`` outside the unit circle ``Gamma1`` restricted to the defect
elements ``{(f, lam f)}`` of ``V^{-[*]}`` is invertible; inside the circle
``Gamma2`` is.  Inverting these restrictions gives the gamma-fields, and
composing with the other boundary map gives the Weyl functions

    M1(lam) = Gamma2 (Gamma1 | defect)^{-1},   |lam| > 1
    M2(lam) = Gamma1 (Gamma2 | defect)^{-1},   |lam| < 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .boundary import exceptional_sets, kernel_extensions, vstar
from .config import get_tol
from .core import Subspace, indef_adjoint, null_space, orth
from .exceptions import GammaNotInvertible, RegionError
from .relations import resolvent

__all__ = [
    "DefectSpace", "WeylData", "NegSquaresEstimate", "PoleReport",
    "defect", "gamma_hat", "gamma", "weyl", "weyl_data", "sharp",
    "identity_residuals", "propagation_residual", "symmetry_residual",
    "neg_squares", "max_neg_squares", "is_simple", "pole_check",
    "reflection_residuals", "inner_grid", "outer_grid", "admissible_pairs",
    "rel_residual",
]

RADII = (0.2, 0.5, 0.8)
N_ANGLES = 8


def rel_residual(L, R):
    """``||L - R|| / max(1, ||L||, ||R||)`` in the spectral norm."""
    L = np.asarray(L, dtype=complex)
    R = np.asarray(R, dtype=complex)
    if L.size == 0:
        return 0.0
    nl = np.linalg.norm(L, 2)
    nr = np.linalg.norm(R, 2)
    return float(np.linalg.norm(L - R, 2) / max(1.0, nl, nr))


@dataclass(frozen=True)
class DefectSpace:
    lam: complex
    N: Subspace
    Nhat: Subspace


def defect(inst, lam):
    """``{f : (f, lam f) in V^{-[*]}}`` and its graph ``{(f, lam f)}``."""
    n = inst.dim
    Q = vstar(inst).graph.basis
    Qa, Qb = Q[:n], Q[n:]
    c = null_space(Qb - lam * Qa)
    Nhat = Subspace.span(Q @ c, 2 * n)
    return DefectSpace(complex(lam), Subspace.span(Qa @ c, n), Nhat)


def _check_region(j, lam):
    a = abs(lam)
    if j == 1 and not a > 1:
        raise RegionError(f"gamma1/M1 need |lam| > 1, got {lam}")
    if j == 2 and not a < 1:
        raise RegionError(f"gamma2/M2 need |lam| < 1, got {lam}")
    if j not in (1, 2):
        raise ValueError("j must be 1 or 2")


def gamma_hat(triplet, j, lam, tol=None):
    """Coordinates (in the graph basis of ``V^{-[*]}``) of ``(Gamma_j | defect)^{-1}``."""
    tol = get_tol(tol)
    _check_region(j, lam)
    t = triplet
    n = t.n
    Q = t.Q
    G = t.G1 if j == 1 else t.G2
    m = G.shape[0]
    A = np.vstack([Q[n:] - lam * Q[:n], G])
    if A.shape[0] != A.shape[1]:
        raise GammaNotInvertible("defect and boundary dimensions do not match", lam)
    if A.shape[0] == 0:
        return np.zeros((0, m), dtype=complex)
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] <= tol * max(1.0, s[0]):
        raise GammaNotInvertible(f"boundary map {j} is not invertible on the defect at {lam}", lam)
    rhs = np.vstack([np.zeros((n, m), dtype=complex), np.eye(m)])
    return np.linalg.solve(A, rhs)


def gamma(triplet, j, lam, tol=None):
    """``gamma_j(lam)``: maps ``N_j`` into ``H``."""
    return triplet.Q[: triplet.n] @ gamma_hat(triplet, j, lam, tol)


def weyl(triplet, j, lam, tol=None):
    """``M1(lam)`` (``N1 -> N2``) for ``j=1``, ``M2(lam)`` (``N2 -> N1``) for ``j=2``."""
    gh = gamma_hat(triplet, j, lam, tol)
    other = triplet.G2 if j == 1 else triplet.G1
    return other @ gh


@dataclass(frozen=True)
class WeylData:
    lam: complex
    in_D1: bool
    in_D2: bool
    gamma1: np.ndarray = None
    gamma2: np.ndarray = None
    M1: np.ndarray = None
    M2: np.ndarray = None

    @property
    def M(self):
        """The Weyl function on whichever side of the circle ``lam`` lies."""
        return self.M1 if self.in_D1 else self.M2


def weyl_data(triplet, lam, ex=None, tol=None):
    ex = exceptional_sets(triplet) if ex is None else ex
    d1, d2 = ex.in_D1(lam), ex.in_D2(lam)
    kw = {}
    if d1:
        gh = gamma_hat(triplet, 1, lam, tol)
        kw.update(gamma1=triplet.Q[: triplet.n] @ gh, M1=triplet.G2 @ gh)
    if d2:
        gh = gamma_hat(triplet, 2, lam, tol)
        kw.update(gamma2=triplet.Q[: triplet.n] @ gh, M2=triplet.G1 @ gh)
    return WeylData(complex(lam), d1, d2, **kw)


def sharp(F, lam, source, target):
    """``F(1/conj(lam))^{[*]}`` for ``F(mu)`` mapping ``source`` to ``target``."""
    if lam == 0:
        raise RegionError("the reflection of 0 is not defined")
    return indef_adjoint(F(1 / np.conj(lam)), source, target)


def _adj(A, source, target):
    return indef_adjoint(A, source, target)


def identity_residuals(triplet, lam, mu, tol=None):
    """Residuals of the four Weyl-function/gamma-field identities.

    Only identities whose region requirements hold for ``(lam, mu)`` are
    evaluated.  Keys: ``"outer"`` (both outside the circle), ``"inner"``
    (both inside), ``"inner-outer"`` (``lam`` inside, ``mu`` outside) and
    ``"outer-inner"``.
    """
    t = triplet
    H, N1, N2 = t.space, t.N1, t.N2
    den = 1 - lam * np.conj(mu)
    if abs(den) <= 1e-12:
        raise RegionError("1 - lam conj(mu) vanishes")
    lo, mo = abs(lam) > 1, abs(mu) > 1
    li, mi = abs(lam) < 1, abs(mu) < 1
    out = {}
    if lo and mo:
        g_l, g_m = gamma(t, 1, lam, tol), gamma(t, 1, mu, tol)
        M_l, M_m = weyl(t, 1, lam, tol), weyl(t, 1, mu, tol)
        L = -(np.eye(N1.dim) - _adj(M_m, N1, N2) @ M_l) / den
        out["outer"] = rel_residual(L, _adj(g_m, N1, H) @ g_l)
    if li and mi:
        g_l, g_m = gamma(t, 2, lam, tol), gamma(t, 2, mu, tol)
        M_l, M_m = weyl(t, 2, lam, tol), weyl(t, 2, mu, tol)
        L = (np.eye(N2.dim) - _adj(M_m, N2, N1) @ M_l) / den
        out["inner"] = rel_residual(L, _adj(g_m, N2, H) @ g_l)
    if li and mo:
        L = (_adj(weyl(t, 1, mu, tol), N1, N2) - weyl(t, 2, lam, tol)) / den
        R = _adj(gamma(t, 1, mu, tol), N1, H) @ gamma(t, 2, lam, tol)
        out["inner-outer"] = rel_residual(L, R)
    if lo and mi:
        L = (weyl(t, 1, lam, tol) - _adj(weyl(t, 2, mu, tol), N2, N1)) / den
        R = _adj(gamma(t, 2, mu, tol), N2, H) @ gamma(t, 1, lam, tol)
        out["outer-inner"] = rel_residual(L, R)
    if not out:
        raise RegionError(f"no identity applies at ({lam}, {mu})")
    return out


def propagation_residual(triplet, j, lam, mu, V_j=None, tol=None):
    """Residual of ``gamma_j(lam) = (I + (lam - mu) R_lam(V_j)) gamma_j(mu)``."""
    if V_j is None:
        V_j = kernel_extensions(triplet)[j - 1]
    R = resolvent(V_j, lam, tol)
    L = gamma(triplet, j, lam, tol)
    rhs = (np.eye(triplet.n) + (lam - mu) * R) @ gamma(triplet, j, mu, tol)
    return rel_residual(L, rhs)


def symmetry_residual(triplet, lam, tol=None):
    """Residual of ``M1(lam) = M2(1/conj(lam))^{[*]}`` for ``|lam| > 1``."""
    t = triplet
    rhs = sharp(lambda z: weyl(t, 2, z, tol), lam, t.N2, t.N1)
    return rel_residual(weyl(t, 1, lam, tol), rhs)


def reflection_residuals(triplet, lam, V12=None, tol=None):
    """Residuals of the two boundary images of resolvent columns.

    With ``lo`` the point of ``{lam, 1/conj(lam)}`` outside the circle and
    ``li`` the one inside:

    * ``Gamma2 (R, I + lo R)`` with ``R = R_lo(V1)`` against ``-(1/lo) gamma2^#(lo)``,
    * ``Gamma1 (R, I + li R)`` with ``R = R_li(V2)`` against ``(1/li) gamma1^#(li)``.
    """
    t = triplet
    lam = complex(lam)
    if lam == 0 or abs(abs(lam) - 1) < 1e-12:
        raise RegionError("need lam off the circle and nonzero")
    lo = lam if abs(lam) > 1 else 1 / np.conj(lam)
    li = 1 / np.conj(lo)
    V1, V2 = kernel_extensions(t) if V12 is None else V12
    n = t.n
    I = np.eye(n)
    R1 = resolvent(V1, lo, tol)
    left1 = t.ambient(2) @ np.vstack([R1, I + lo * R1])
    right1 = -(1 / lo) * sharp(lambda z: gamma(t, 2, z, tol), lo, t.N2, t.space)
    R2 = resolvent(V2, li, tol)
    left2 = t.ambient(1) @ np.vstack([R2, I + li * R2])
    right2 = (1 / li) * sharp(lambda z: gamma(t, 1, z, tol), li, t.N1, t.space)
    return {"outer": rel_residual(left1, right1), "inner": rel_residual(left2, right2)}


# -- sampling grids -------------------------------------------------------
def inner_grid(ex=None, radii=RADII, n_angles=N_ANGLES):
    """Points inside the circle avoiding exceptional points and 0."""
    pts = []
    for r in radii:
        for k in range(n_angles):
            z = r * np.exp(2j * np.pi * (k + 0.5) / n_angles)
            if abs(z) < 1e-6:
                continue
            if ex is not None and not ex.in_D2(z):
                continue
            pts.append(complex(z))
    return pts


def outer_grid(ex=None, radii=RADII, n_angles=N_ANGLES):
    """Reflections ``1/conj(z)`` of the inner grid, avoiding exceptional points.

    A point is dropped when either it or its reflection is exceptional, so
    the reflected gamma-fields used by the resolvent formulas exist.
    """
    pts = [1 / np.conj(z) for z in inner_grid(ex, radii, n_angles)]
    if ex is not None:
        pts = [z for z in pts if ex.in_D1(z)]
    return [complex(z) for z in pts]


def admissible_pairs(points_a, points_b, count, seed=0, gap=1e-3):
    """``count`` seeded pairs with ``|1 - a conj(b)| > gap``."""
    rng = np.random.default_rng(seed)
    pairs = [(a, b) for a in points_a for b in points_b if abs(1 - a * np.conj(b)) > gap]
    if len(pairs) <= count:
        return pairs
    idx = np.sort(rng.choice(len(pairs), size=count, replace=False))
    return [pairs[i] for i in idx]


# -- negative squares -----------------------------------------------------
@dataclass(frozen=True)
class NegSquaresEstimate:
    count: int
    sample_points: tuple
    gram: np.ndarray = field(repr=False)


def neg_squares(samples, source, target, rtol=1e-8):
    """Negative eigenvalues of the block kernel matrix of sampled values.

    ``samples`` is a list of ``(point, s(point))`` with ``s(point)`` mapping
    ``source`` into ``target``.  Block ``(j, i)`` is
    ``(J_src - s_j^* J_tgt s_i) / (1 - z_i conj(z_j))``.
    """
    pts = [complex(z) for z, _ in samples]
    S = [np.asarray(s, dtype=complex) for _, s in samples]
    k = source.dim
    N = len(S)
    P = np.zeros((N * k, N * k), dtype=complex)
    Js, Jt = source.gram, target.gram
    for j in range(N):
        for i in range(N):
            den = 1 - pts[i] * np.conj(pts[j])
            if abs(den) < 1e-12:
                raise RegionError("kernel denominator vanishes")
            P[j * k:(j + 1) * k, i * k:(i + 1) * k] = (Js - S[j].conj().T @ Jt @ S[i]) / den
    P = (P + P.conj().T) / 2
    if P.size == 0:
        return NegSquaresEstimate(0, tuple(pts), P)
    w = np.linalg.eigvalsh(P)
    thr = rtol * max(1.0, float(np.abs(w).max()))
    return NegSquaresEstimate(int(np.sum(w < -thr)), tuple(pts), P)


def max_neg_squares(func, pool, source, target, seed=0, resamples=5, size=12):
    """Largest :func:`neg_squares` count over seeded subsets of ``pool``."""
    rng = np.random.default_rng(seed)
    pool = list(pool)
    vals = {z: func(z) for z in pool}
    best = None
    for _ in range(resamples):
        if len(pool) <= size:
            chosen = pool
        else:
            chosen = [pool[i] for i in np.sort(rng.choice(len(pool), size, replace=False))]
        est = neg_squares([(z, vals[z]) for z in chosen], source, target)
        if best is None or est.count > best.count:
            best = est
    return best


# -- simplicity and poles -------------------------------------------------
def is_simple(inst, sample_lambdas=None):
    """True when the defect subspaces at the sample points span ``H``."""
    if sample_lambdas is None:
        sample_lambdas = inner_grid() + outer_grid()
    blocks = [defect(inst, z).N.basis for z in sample_lambdas]
    stacked = np.hstack(blocks) if blocks else np.zeros((inst.dim, 0))
    return orth(stacked).shape[1] == inst.dim


@dataclass(frozen=True)
class PoleReport:
    points: tuple
    growth: tuple          # per point: ratios between consecutive radii
    grid_max: float
    ratio_floor: float

    @property
    def poles_ok(self):
        return all(all(r >= self.ratio_floor for r in g) for g in self.growth)

    @property
    def bounded(self):
        return bool(np.isfinite(self.grid_max))

    @property
    def passed(self):
        return self.poles_ok and self.bounded


def _max_norm_on_circle(triplet, c, r, n_pts=8):
    vals = []
    for k in range(n_pts):
        z = c + r * np.exp(2j * np.pi * (k + 0.25) / n_pts)
        try:
            vals.append(np.linalg.norm(weyl(triplet, 1, z), 2))
        except (GammaNotInvertible, RegionError):
            continue
    return max(vals) if vals else np.nan


def pole_check(triplet, around=None, radii=(1e-3, 1e-4, 1e-5), slack=0.01):
    """Growth of ``||M1||`` on shrinking circles and its size on the outer grid.

    A pole of order ``>= 1`` makes the maximum grow at least tenfold per
    decade of radius; ``slack`` allows for the finite radii.
    """
    ex = exceptional_sets(triplet)
    pts = tuple(ex.Lambda1) if around is None else tuple(np.atleast_1d(around))
    growth = []
    for c in pts:
        # radii are relative so that distant poles are probed at the same resolution
        m = [_max_norm_on_circle(triplet, c, r * max(1.0, abs(c))) for r in radii]
        growth.append(tuple(m[i + 1] / m[i] for i in range(len(m) - 1)))
    vals = []
    for z in outer_grid(ex):
        try:
            vals.append(np.linalg.norm(weyl(triplet, 1, z), 2))
        except GammaNotInvertible:
            vals.append(np.inf)
    grid_max = max(vals) if vals else 0.0
    return PoleReport(tuple(complex(p) for p in pts), tuple(growth), float(grid_max),
                      10 * (1 - slack))
