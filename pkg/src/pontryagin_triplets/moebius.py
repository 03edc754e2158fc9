"""Linear-fractional change of variable for isometries.

For ``|z0| > 1`` the map

    V  ->  V0 = (1 - |z0|^2)(V - z0)^{-1} - conj(z0)

sends the pair ``(h, h')`` of ``V`` to ``(h' - z0 h, h - conj(z0) h')`` and
keeps isometries isometric.  The spectral parameter moves by

    zeta = (1 - conj(z0) lam) / (lam - z0),

which maps the disc and its exterior onto themselves.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary import BoundaryTriplet, IsometryInstance
from .config import get_tol
from .exceptions import RegionError, SingularShift
from .relations import pencil_spectrum, resolvent
from .weyl import gamma, rel_residual, weyl

__all__ = [
    "MoebiusContext", "param_map", "inverse_param_map", "transform_relation",
    "inverse_transform_relation", "transform_operator", "transform_triplet",
    "moebius_context", "transform_laws", "resolvent_transfer_residual",
    "regular_point_agreement",
]

MIN_GAP = 0.1


def _check_z0(z0):
    z0 = complex(z0)
    if abs(z0) - 1 < MIN_GAP:
        raise RegionError(f"|z0| must exceed 1 + {MIN_GAP}, got |z0| = {abs(z0):.4g}")
    return z0


def param_map(lam, z0):
    lam, z0 = complex(lam), complex(z0)
    if lam == z0:
        raise RegionError("lam = z0 is the pole of the parameter map")
    return (1 - np.conj(z0) * lam) / (lam - z0)


def inverse_param_map(zeta, z0):
    zeta, z0 = complex(zeta), complex(z0)
    if zeta == -np.conj(z0):
        raise RegionError("zeta = -conj(z0) is the pole of the inverse map")
    return (1 + zeta * z0) / (np.conj(z0) + zeta)


def transform_relation(T, z0):
    """``(1 - |z0|^2)(T - z0)^{-1} - conj(z0)`` by the relation calculus."""
    return T.transform(-z0, 1, 1, -np.conj(z0))


def inverse_transform_relation(T0, z0):
    """Undo :func:`transform_relation`.

    The pair map has matrix ``[[-z0, 1], [1, -conj(z0)]]``; its inverse is a
    multiple of ``[[conj(z0), 1], [1, z0]]`` and relations ignore scaling.
    """
    return T0.transform(np.conj(z0), 1, 1, z0)


def transform_operator(inst, z0=2.0, tol=None):
    """The transformed isometry ``V0`` as a new instance."""
    z0 = _check_z0(z0)
    tol = get_tol(tol)
    spec = pencil_spectrum(inst.V, tol).eigenvalues
    if spec.size and np.min(np.abs(spec - z0)) <= 1e-8:
        raise SingularShift(f"z0 = {z0} is an eigenvalue of V")
    V0 = transform_relation(inst.V, z0)
    return IsometryInstance(inst.space, V0, label=f"{inst.label}-moebius")


def _pair_matrix(n, z0):
    I = np.eye(n)
    return np.block([[-z0 * I, I], [I, -np.conj(z0) * I]])


def transform_triplet(triplet, inst0, z0):
    """Boundary triplet for ``V0``: ``Gamma_j^0 f = sqrt(|z0|^2 - 1) Gamma_j h``,
    where ``f = (h' - z0 h, h - conj(z0) h')``."""
    z0 = complex(z0)
    n = triplet.n
    Minv = np.linalg.inv(_pair_matrix(n, z0))
    c = np.sqrt(abs(z0) ** 2 - 1)
    A1 = c * triplet.ambient(1) @ Minv
    A2 = c * triplet.ambient(2) @ Minv
    return BoundaryTriplet.from_ambient(inst0, A1, A2, triplet.N1, triplet.N2, triplet.kappa1)


@dataclass(frozen=True)
class MoebiusContext:
    z0: complex
    triplet: BoundaryTriplet
    inst0: IsometryInstance
    triplet0: BoundaryTriplet

    def zeta(self, lam):
        return param_map(lam, self.z0)

    def lam(self, zeta):
        return inverse_param_map(zeta, self.z0)


def moebius_context(triplet, z0=2.0, tol=None):
    inst0 = transform_operator(triplet.inst, z0, tol)
    return MoebiusContext(complex(z0), triplet, inst0, transform_triplet(triplet, inst0, z0))


def transform_laws(ctx, lam, tol=None):
    """Residuals of ``M_j^0(zeta) = M_j(lam)`` and
    ``gamma_j^0(zeta) = (lam - z0)/sqrt(|z0|^2 - 1) gamma_j(lam)``."""
    lam = complex(lam)
    if abs(abs(lam) - 1) < 1e-12:
        raise RegionError("lam on the unit circle")
    j = 1 if abs(lam) > 1 else 2
    z = ctx.zeta(lam)
    c = (lam - ctx.z0) / np.sqrt(abs(ctx.z0) ** 2 - 1)
    m_res = rel_residual(weyl(ctx.triplet0, j, z, tol), weyl(ctx.triplet, j, lam, tol))
    g_res = rel_residual(gamma(ctx.triplet0, j, z, tol), c * gamma(ctx.triplet, j, lam, tol))
    return {"weyl": m_res, "gamma": g_res}


def resolvent_transfer_residual(Vt, z0, lam, tol=None):
    """Residual of ``(Vt0 - zeta)^{-1} = (lam - z0)/(|z0|^2 - 1) (I + (lam - z0)(Vt - lam)^{-1})``."""
    z0 = complex(z0)
    lam = complex(lam)
    Vt0 = transform_relation(Vt, z0)
    zeta = param_map(lam, z0)
    n = Vt.source.dim
    left = resolvent(Vt0, zeta, tol)
    right = (lam - z0) / (abs(z0) ** 2 - 1) * (np.eye(n) + (lam - z0) * resolvent(Vt, lam, tol))
    return rel_residual(left, right)


def regular_point_agreement(Vt, z0, lam, tol=None):
    """``(zeta regular for Vt0, lam regular for Vt)``; both should agree."""
    Vt0 = transform_relation(Vt, z0)
    zeta = param_map(lam, z0)

    def regular(T, p):
        try:
            resolvent(T, p, tol)
            return True
        except Exception:
            return False

    return regular(Vt0, zeta), regular(Vt, lam)
