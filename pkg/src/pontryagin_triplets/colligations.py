"""Unitary colligations, exit-space extensions and generalized resolvents.

A colligation is a unitary ``U = [[T, F], [G, H]]`` from ``state (+) N2`` to
``state (+) N1``.  Taking ``state`` as an exit space ``Hperp`` and lifting a
boundary triplet of ``V`` to ``Htilde = Hperp (+) H`` (``Hperp`` first), the
graph of ``U`` becomes a parameter whose extension is unitary in
``Htilde``.  Its compressed resolvent is computed from the characteristic
function ``Theta(lam) = H + lam G (I - lam T)^{-1} F``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary import (BoundaryTriplet, IsometryInstance,
                       extension, kernel_extensions)
from .config import get_tol
from .core import (PontryaginSpace, Subspace, indef_adjoint, null_space, orth,
                   ortho_companion, subspace_signature)
from .exceptions import (DimensionMismatch, InfeasibleKappa1, NotRegular,
                         PencilSingular, SingularAtLambda)
from .relations import LinearRelation, resolvent
from .resolvents import region_of
from .sampling import canonical_factor, random_j_unitary
from .weyl import gamma, rel_residual, sharp, weyl

__all__ = [
    "UnitaryColligation", "ColligationReport", "ExitSpace", "LiftedTriplet",
    "verify_colligation", "char_function", "char_function_block",
    "char_function_resolvent", "is_simple_colligation", "reducing_subspace",
    "random_simple_colligation", "with_isolated_block", "lift_instance",
    "lift_triplet", "block_gamma", "block_weyl", "lift_residuals",
    "exit_extension", "compress", "compress_coresolvent",
    "generalized_resolvent", "gres_from_theta", "coresolvent",
    "MinimalDecomposition", "minimal_decompose", "minimal_compression_residual",
    "moebius_theta", "moebius_exit_extension",
]


class UnitaryColligation:
    """``(state, N2, N1; U)`` with ``U`` unitary between the block sums."""

    def __init__(self, state, input_space, output_space, U):
        self.state = state
        self.input = input_space
        self.output = output_space
        U = np.asarray(U, dtype=complex)
        p = state.dim
        if U.shape != (p + output_space.dim, p + input_space.dim):
            raise DimensionMismatch(f"U has shape {U.shape}, spaces need "
                                    f"{(p + output_space.dim, p + input_space.dim)}")
        self.U = U

    @classmethod
    def from_blocks(cls, state, input_space, output_space, T, F, G, H):
        U = np.block([[np.asarray(T, complex), np.asarray(F, complex)],
                      [np.asarray(G, complex), np.asarray(H, complex)]])
        return cls(state, input_space, output_space, U)

    @property
    def p(self):
        return self.state.dim

    @property
    def T(self):
        return self.U[: self.p, : self.p]

    @property
    def F(self):
        return self.U[: self.p, self.p:]

    @property
    def G(self):
        return self.U[self.p:, : self.p]

    @property
    def H(self):
        return self.U[self.p:, self.p:]

    @property
    def in_space(self):
        return self.state.direct_sum(self.input)

    @property
    def out_space(self):
        return self.state.direct_sum(self.output)

    def with_blocks(self, **blocks):
        b = {k: getattr(self, k) for k in "TFGH"}
        b.update(blocks)
        return UnitaryColligation.from_blocks(self.state, self.input, self.output, **b)

    def __repr__(self):
        return (f"UnitaryColligation(state={self.p}, in={self.input.dim}, "
                f"out={self.output.dim})")


@dataclass(frozen=True)
class ColligationReport:
    residuals: dict
    tol: float

    @property
    def max_residual(self):
        return max(self.residuals.values(), default=0.0)

    @property
    def passed(self):
        return self.max_residual <= self.tol


def verify_colligation(D, tol=None):
    """Residuals of the six block identities expressing unitarity of ``U``."""
    tol = get_tol(tol)
    S, N2, N1 = D.state, D.input, D.output
    T, F, G, H = D.T, D.F, D.G, D.H
    Ts = indef_adjoint(T, S, S)
    Fs = indef_adjoint(F, N2, S)
    Gs = indef_adjoint(G, S, N1)
    Hs = indef_adjoint(H, N2, N1)

    def r(A):
        return float(np.abs(A).max(initial=0.0))

    res = {
        "state-isometric": r(Ts @ T + Gs @ G - np.eye(S.dim)),
        "input-isometric": r(Fs @ F + Hs @ H - np.eye(N2.dim)),
        "cross-isometric": r(Ts @ F + Gs @ H),
        "state-coisometric": r(T @ Ts + F @ Fs - np.eye(S.dim)),
        "output-coisometric": r(G @ Gs + H @ Hs - np.eye(N1.dim)),
        "cross-coisometric": r(T @ Gs + F @ Hs),
    }
    return ColligationReport(res, tol)


def _solve_state(D, lam, tol):
    A = np.eye(D.p) - lam * D.T
    if D.p and np.linalg.svd(A, compute_uv=False)[-1] <= tol:
        raise SingularAtLambda(f"1/{lam} is an eigenvalue of T")
    return A


def char_function(D, lam, tol=None):
    """``Theta(lam) = H + lam G (I - lam T)^{-1} F``."""
    tol = get_tol(tol)
    A = _solve_state(D, lam, tol)
    if D.p == 0:
        return D.H.copy()
    return D.H + lam * D.G @ np.linalg.solve(A, D.F)


def char_function_block(D, lam, tol=None):
    """Bottom-right block of ``U (I - lam P U)^{-1}`` with ``P`` the state projection."""
    tol = get_tol(tol)
    _solve_state(D, lam, tol)
    p, k = D.p, D.input.dim
    PU = np.zeros((p + k, p + k), dtype=complex)
    PU[:p] = D.U[:p]
    W = D.U @ np.linalg.inv(np.eye(p + k) - lam * PU)
    return W[p:, p:]


def char_function_resolvent(D, lam, tol=None):
    """``P_{N1} (I - lam U P)^{-1} U`` restricted to ``N2``."""
    tol = get_tol(tol)
    _solve_state(D, lam, tol)
    p, k = D.p, D.output.dim
    UP = np.zeros((p + k, p + k), dtype=complex)
    UP[:, :p] = D.U[:, :p]
    W = np.linalg.inv(np.eye(p + k) - lam * UP) @ D.U
    return W[p:, p:]


def reducing_subspace(D, max_iter=None):
    """Largest subspace of ``ker G`` and ``ker F^{[*]}`` invariant under ``T``, ``T^{[*]}``."""
    S = D.state
    p = D.p
    if p == 0:
        return Subspace.zero(0)
    Ts = indef_adjoint(D.T, S, S)
    Fs = indef_adjoint(D.F, D.input, S)
    K = Subspace(null_space(np.vstack([D.G, Fs])))
    for _ in range(max_iter or p + 1):
        if K.dim == 0:
            break
        B = K.basis
        P = np.eye(p) - K.projector
        c = null_space(np.vstack([P @ D.T @ B, P @ Ts @ B]))
        new = Subspace.span(B @ c, p)
        if new.dim == K.dim:
            break
        K = new
    return K


def is_simple_colligation(D):
    return reducing_subspace(D).dim == 0


def random_simple_colligation(state_dim, neg_index, n2_dim, n1_dim, seed,
                              state=None, input_space=None, output_space=None,
                              max_tries=50):
    """Seeded simple colligation with a Cayley-generated unitary ``U``.

    ``state`` defaults to ``diag(I, -I_neg_index)`` and the channel spaces
    to Hilbert spaces of the given dimensions.  Input and output must have
    the same dimension and negative index.
    """
    state = PontryaginSpace.canonical(state_dim, neg_index) if state is None else state
    N2 = PontryaginSpace.euclidean(n2_dim) if input_space is None else input_space
    N1 = PontryaginSpace.euclidean(n1_dim) if output_space is None else output_space
    if N1.dim != N2.dim or N1.neg_index != N2.neg_index:
        raise InfeasibleKappa1("input and output spaces must have equal dimension and index")
    Jin = state.direct_sum(N2)
    Jout = state.direct_sum(N1)
    Lin, D = canonical_factor(Jin.gram)
    Lout, D2 = canonical_factor(Jout.gram)
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        W = random_j_unitary(D, rng)
        U = np.linalg.solve(Lout, W @ Lin)
        coll = UnitaryColligation(state, N2, N1, U)
        if is_simple_colligation(coll):
            return coll
    raise RuntimeError("could not draw a simple colligation")


def with_isolated_block(D, W, gram):
    """Prepend a state block on which ``U`` acts as the unitary ``W``.

    The new block reduces ``U``, so the result is never simple.
    """
    extra = PontryaginSpace(gram)
    q = extra.dim
    p = D.p
    k_in, k_out = D.input.dim, D.output.dim
    U = np.zeros((q + p + k_out, q + p + k_in), dtype=complex)
    U[:q, :q] = W
    U[q:, q:] = D.U
    return UnitaryColligation(extra.direct_sum(D.state), D.input, D.output, U)


# -- exit space -------------------------------------------------------------
@dataclass(frozen=True)
class ExitSpace:
    Hperp: PontryaginSpace
    H: PontryaginSpace

    @property
    def Htilde(self):
        return self.Hperp.direct_sum(self.H)

    @property
    def p(self):
        return self.Hperp.dim

    def embed(self, x):
        """``H -> Htilde``."""
        x = np.asarray(x, dtype=complex)
        return np.vstack([np.zeros((self.p,) + x.shape[1:], dtype=complex).reshape(self.p, -1),
                          x.reshape(self.H.dim, -1)])

    def project(self, y):
        """Orthoprojection ``Htilde -> H`` (coordinates of the second block)."""
        return np.asarray(y)[self.p:]


def lift_instance(inst, Hperp):
    """``V`` viewed as an isometry in ``Hperp (+) H``."""
    ex = ExitSpace(Hperp, inst.space)
    p = Hperp.dim
    X, Y = inst.V.X, inst.V.Y
    d = X.shape[1]
    Z = np.zeros((p, d))
    graph = np.vstack([Z, X, Z, Y])
    Ht = ex.Htilde
    return IsometryInstance(Ht, LinearRelation(Ht, Ht, graph), label=f"{inst.label}-lifted"), ex


@dataclass(frozen=True)
class LiftedTriplet:
    base: BoundaryTriplet
    exit: ExitSpace
    triplet: BoundaryTriplet


def lift_triplet(triplet, Hperp):
    """Boundary triplet in ``Htilde``: ``Gamma1~ = (m', Gamma1 f)``, ``Gamma2~ = (m, Gamma2 f)``.

    Elements of ``V^{-[*]}`` in ``Htilde`` are ``((m, f), (m', f'))``.
    """
    inst_t, ex = lift_instance(triplet.inst, Hperp)
    p, n = Hperp.dim, triplet.n
    A1, A2 = triplet.ambient(1), triplet.ambient(2)

    def ambient(A, pick_second):
        top = np.zeros((p, 2 * (p + n)), dtype=complex)
        top[:, (p + n if pick_second else 0):(p + n if pick_second else 0) + p] = np.eye(p)
        bot = np.zeros((A.shape[0], 2 * (p + n)), dtype=complex)
        bot[:, p:p + n] = A[:, :n]
        bot[:, 2 * p + n:] = A[:, n:]
        return np.vstack([top, bot])

    N1t = Hperp.direct_sum(triplet.N1)
    N2t = Hperp.direct_sum(triplet.N2)
    lifted = BoundaryTriplet.from_ambient(inst_t, ambient(A1, True), ambient(A2, False),
                                          N1t, N2t, triplet.kappa1 + Hperp.neg_index)
    return LiftedTriplet(triplet, ex, lifted)


def _blockdiag(a, b):
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=complex)
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0]:, a.shape[1]:] = b
    return out


def block_gamma(lifted, j, lam, tol=None):
    """Gamma-fields of the lifted triplet from those of the base triplet."""
    p = lifted.exit.p
    c = 1 / lam if j == 1 else 1.0
    return _blockdiag(c * np.eye(p), gamma(lifted.base, j, lam, tol))


def block_weyl(lifted, j, lam, tol=None):
    p = lifted.exit.p
    c = 1 / lam if j == 1 else lam
    return _blockdiag(c * np.eye(p), weyl(lifted.base, j, lam, tol))


def lift_residuals(lifted, lam, tol=None):
    """Recomputed lifted gamma/Weyl values against the block formulas."""
    j = 1 if abs(lam) > 1 else 2
    t = lifted.triplet
    return {
        "gamma": rel_residual(gamma(t, j, lam, tol), block_gamma(lifted, j, lam, tol)),
        "weyl": rel_residual(weyl(t, j, lam, tol), block_weyl(lifted, j, lam, tol)),
    }


def _check_compatible(lifted, D):
    b = lifted.base
    if D.p != lifted.exit.p or D.input.dim != b.N2.dim or D.output.dim != b.N1.dim:
        raise DimensionMismatch("colligation does not match the exit space and boundary spaces")


def exit_extension(lifted, D):
    """Extension of ``V`` in ``Htilde`` whose boundary parameter is the graph of ``U``."""
    _check_compatible(lifted, D)
    t = lifted.triplet
    tau = LinearRelation.from_matrix(D.U, t.N2, t.N1)
    return extension(t, tau)


def compress(Vtilde, lam, exit, tol=None):
    """``P_H (Vtilde - lam)^{-1}`` restricted to ``H``."""
    R = resolvent(Vtilde, lam, tol)
    p = exit.p
    return R[p:, p:]


def compress_coresolvent(Vtilde, lam, exit, tol=None):
    """``P_H (I - lam Vtilde)^{-1}`` restricted to ``H``."""
    A = Vtilde.matrix(tol)
    N = A.shape[0]
    M = np.eye(N) - lam * A
    if np.linalg.svd(M, compute_uv=False)[-1] <= get_tol(tol):
        raise SingularAtLambda(f"I - {lam} V is singular")
    p = exit.p
    return np.linalg.inv(M)[p:, p:]


def _inv_checked(A, lam, tol):
    if A.size == 0:
        return A.copy()
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] <= tol * max(1.0, s[0]):
        raise PencilSingular(f"boundary operator singular at {lam}", lam)
    return np.linalg.inv(A)


def gres_from_theta(triplet, theta, lam, V12=None, ex=None, tol=None):
    """Generalized resolvent for a parameter function ``theta`` (``N2 -> N1``).

    Outside the circle ``theta(1/lam)`` enters; inside,
    ``theta(conj(lam))^{[*]}``.
    """
    tol = get_tol(tol)
    t = triplet
    j = region_of(t, lam, ex)
    V1, V2 = kernel_extensions(t) if V12 is None else V12
    if j == 1:
        Th = theta(1 / lam)
        M = weyl(t, 1, lam, tol)
        mid = Th @ _inv_checked(np.eye(t.N2.dim) - M @ Th, lam, tol)
        gs = sharp(lambda z: gamma(t, 2, z, tol), lam, t.N2, t.space)
        return resolvent(V1, lam, tol) - (1 / lam) * gamma(t, 1, lam, tol) @ mid @ gs
    Ths = indef_adjoint(theta(np.conj(lam)), t.N2, t.N1)
    M = weyl(t, 2, lam, tol)
    mid = Ths @ _inv_checked(np.eye(t.N1.dim) - M @ Ths, lam, tol)
    gs = sharp(lambda z: gamma(t, 1, z, tol), lam, t.N1, t.space)
    return resolvent(V2, lam, tol) + (1 / lam) * gamma(t, 2, lam, tol) @ mid @ gs


def generalized_resolvent(triplet, D, lam, V12=None, ex=None, tol=None):
    return gres_from_theta(triplet, lambda z: char_function(D, z, tol), lam, V12, ex, tol)


def coresolvent(triplet, D, lam, V12=None, tol=None):
    """Compressed ``(I - lam Vtilde)^{-1}`` from the characteristic function.

    For ``|lam| < 1`` (``w = 1/lam`` outside the circle)::

        (I - lam V1)^{-1} + gamma1(w) Theta(lam) (I - M1(w) Theta(lam))^{-1} gamma2(conj(lam))^{[*]}

    and for ``|lam| > 1``::

        (I - lam V2)^{-1} - gamma2(w) Theta^#(lam) (I - M2(w) Theta^#(lam))^{-1} gamma1(conj(lam))^{[*]}

    with ``Theta^#(lam) = Theta(1/conj(lam))^{[*]}``.
    """
    tol = get_tol(tol)
    t = triplet
    H, N1, N2 = t.space, t.N1, t.N2
    lam = complex(lam)
    if lam == 0:
        return np.eye(t.n, dtype=complex)
    w = 1 / lam
    j = region_of(t, w)
    V1, V2 = kernel_extensions(t) if V12 is None else V12
    if j == 1:
        Th = char_function(D, lam, tol)
        M = weyl(t, 1, w, tol)
        mid = Th @ _inv_checked(np.eye(N2.dim) - M @ Th, lam, tol)
        base = -w * resolvent(V1, w, tol)      # (I - lam V1)^{-1}
        right = indef_adjoint(gamma(t, 2, np.conj(lam), tol), N2, H)
        return base + gamma(t, 1, w, tol) @ mid @ right
    Th = indef_adjoint(char_function(D, 1 / np.conj(lam), tol), N2, N1)
    M = weyl(t, 2, w, tol)
    mid = Th @ _inv_checked(np.eye(N1.dim) - M @ Th, lam, tol)
    base = -w * resolvent(V2, w, tol)
    right = indef_adjoint(gamma(t, 1, np.conj(lam), tol), N1, H)
    return base - gamma(t, 2, w, tol) @ mid @ right


# -- minimal part -----------------------------------------------------------
_SPAN_POINTS = (2, -2, 3, -3, 0.5, -0.5, 1 / 3, -1 / 3, 2j, 0.5j)


@dataclass(frozen=True)
class MinimalDecomposition:
    Hm: Subspace
    Hu: Subspace
    Vm: LinearRelation
    Vu: LinearRelation
    invariance: float

    @property
    def is_minimal(self):
        return self.Hu.dim == 0


def _minimal_span(Vtilde, exit, seed=0, tol=None):
    N = exit.Htilde.dim
    E = np.vstack([np.zeros((exit.p, exit.H.dim)), np.eye(exit.H.dim)])
    cols = [E]
    rng = np.random.default_rng(seed)
    pts = list(_SPAN_POINTS)
    rank, stable = orth(E).shape[1], 0
    i = 0
    while stable < 2:
        if i < len(pts):
            z = pts[i]
        else:
            z = complex(*(rng.uniform(-3, 3, 2)))
        i += 1
        try:
            cols.append(resolvent(Vtilde, z, tol) @ E)
        except Exception:
            continue
        new_rank = orth(np.hstack(cols)).shape[1]
        if i >= len(pts):
            stable = stable + 1 if new_rank == rank else 0
        rank = new_rank
        if rank == N and i >= len(pts):
            break
    return Subspace.span(np.hstack(cols), N)


def minimal_decompose(Vtilde, exit, seed=0, tol=None):
    """Split ``Htilde`` into the span generated by ``H`` and its complement.

    Raises
    ------
    NotRegular
        If the indefinite complement of the span is not positive definite.
    """
    tol = get_tol(tol)
    Ht = exit.Htilde
    Hm = _minimal_span(Vtilde, exit, seed, tol)
    Hu = ortho_companion(Ht, Hm)
    sig = subspace_signature(Ht, Hu, tol=1e-8)
    if sig.neg or sig.iso:
        raise NotRegular(f"complement of the minimal span has signature {tuple(sig)}")
    A = Vtilde.matrix(tol)

    def part(S):
        if S.dim == 0:
            return LinearRelation.zero(Ht), 0.0
        img = A @ S.basis
        resid = float(np.abs(img - S.projector @ img).max())
        return LinearRelation.from_pairs(S.basis, img, Ht), resid

    Vm, r1 = part(Hm)
    Vu, r2 = part(Hu)
    return MinimalDecomposition(Hm, Hu, Vm, Vu, max(r1, r2))


def minimal_compression_residual(Vtilde, dec, exit, lam, tol=None):
    """Compression through the full extension against the minimal part."""
    full = compress(Vtilde, lam, exit, tol)
    B = dec.Hm.basis
    A = Vtilde.matrix(tol)
    C = B.conj().T @ A @ B          # Vm in the orthonormal basis of Hm
    p = exit.p
    E = np.vstack([np.zeros((p, exit.H.dim)), np.eye(exit.H.dim)])
    c = B.conj().T @ E
    k = B.shape[1]
    part = B @ np.linalg.solve(C - lam * np.eye(k), c)
    return rel_residual(full, part[p:])


# -- moebius route for the characteristic function ---------------------------
def moebius_theta(D0, z0, tol=None):
    """``Theta(w) = Theta0(1/zeta)`` where ``w = (zeta + conj(z0))/(1 + z0 zeta)``.

    Returns a callable ``Theta``.  Solving for ``1/zeta`` gives
    ``(1 - z0 w)/(w - conj(z0))``.
    """
    z0 = complex(z0)

    def theta(w):
        return char_function(D0, (1 - z0 * w) / (w - np.conj(z0)), tol)

    return theta


def moebius_exit_extension(ctx, Hperp, D0):
    """Extension of ``V`` obtained by transporting the exit extension of ``V0`` back.

    ``D0`` is a colligation for the lifted triplet of the transformed
    operator.  Returns ``(Vtilde, exit)``.
    """
    from .moebius import inverse_transform_relation

    lifted0 = lift_triplet(ctx.triplet0, Hperp)
    Vt0 = exit_extension(lifted0, D0)
    return inverse_transform_relation(Vt0, ctx.z0), lifted0.exit
