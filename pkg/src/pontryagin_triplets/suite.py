"""Verification suites over instance files.

Every check produces a residual and a threshold; a check passes when the
residual does not exceed the threshold.  Exceptions raised inside a check
turn it into a failure with residual ``inf`` and the error message as
detail, so a suite always runs to the end.

Reports are sorted by ``(instance, name)`` and, unless ``timing=True`` is
requested, hold no wall-clock data, so identical inputs give identical
output.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .boundary import (IsometryInstance, classify_extension_correspondence,
                       exceptional_sets, extension, kernel_extensions,
                       verify_triplet)
from .colligations import (compress, compress_coresolvent, coresolvent,
                           exit_extension, generalized_resolvent,
                           gres_from_theta, is_simple_colligation, lift_residuals,
                           lift_triplet, minimal_compression_residual, minimal_decompose,
                           moebius_exit_extension, moebius_theta,
                           random_simple_colligation, verify_colligation)
from .config import get_tol
from .exceptions import TripletError
from .io import InstanceFile, parse_instance
from .moebius import moebius_context, resolvent_transfer_residual, transform_laws
from .relations import LinearRelation, pencil_spectrum
from .resolvents import (PointClass, boundary_eigenvalues, direct_resolvent,
                         kernel_correspondence, krein_resolvent, point_class,
                         sharp_consistency)
from .weyl import (admissible_pairs, identity_residuals, inner_grid, is_simple,
                   max_neg_squares, outer_grid, pole_check, propagation_residual,
                   reflection_residuals, rel_residual, symmetry_residual, weyl)

__all__ = ["Check", "Report", "SUITES", "run_suite", "run_checks"]

SUITES = ("core", "weyl", "resolvent", "gres", "all")

# thresholds for the different kinds of residual
GREEN_TOL = 1e-9
SUBSPACE_TOL = 1e-9
IDENTITY_TOL = 1e-8
SYMMETRY_TOL = 1e-9
RESOLVENT_TOL = 1e-8
EIGEN_MATCH_TOL = 1e-7
LIFT_TOL = 1e-9
GRES_TOL = 1e-8
MOEBIUS_LAW_TOL = 1e-9
MOEBIUS_RR_TOL = 1e-10
MIN2_TOL = 1e-9

N_PAIRS = 20
N_POINTS = 10
Z0 = 2.0


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    threshold: float
    instance: str = ""
    detail: str = ""
    seconds: float = field(default=0.0, compare=False)

    @property
    def passed(self):
        return bool(self.residual <= self.threshold)

    def to_dict(self, timing=False):
        d = {"instance": self.instance, "name": self.name,
             "residual": _fmt(self.residual), "threshold": _fmt(self.threshold),
             "pass": self.passed}
        if self.detail:
            d["detail"] = self.detail
        if timing:
            d["seconds"] = round(self.seconds, 4)
        return d


def _fmt(x):
    x = float(x)
    if math.isinf(x) or math.isnan(x):
        return str(x)
    return f"{x:.3e}"


@dataclass
class Report:
    """Named checks with an aggregate verdict."""

    checks: list
    suite: str = "all"
    seed: int = 0
    tol: float = 1e-9

    def __post_init__(self):
        self.checks = sorted(self.checks, key=lambda c: (c.instance, c.name))

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def failed(self):
        return [c for c in self.checks if not c.passed]

    def __len__(self):
        return len(self.checks)

    def names(self):
        return [c.name for c in self.checks]

    def get(self, name, instance=None):
        for c in self.checks:
            if c.name == name and (instance is None or c.instance == instance):
                return c
        raise KeyError(name)

    def summary(self):
        n = len(self.checks)
        k = sum(c.passed for c in self.checks)
        insts = sorted({c.instance for c in self.checks})
        bad = sorted({c.instance for c in self.checks if not c.passed})
        return {"checks": n, "passed": k, "failed": n - k, "instances": len(insts),
                "failed_instances": bad, "verdict": "pass" if self.passed else "fail"}

    def to_json(self, timing=False):
        data = {"suite": self.suite, "seed": self.seed, "tol": _fmt(self.tol),
                "summary": self.summary(),
                "checks": [c.to_dict(timing) for c in self.checks]}
        return json.dumps(data, indent=1, sort_keys=True)

    def to_text(self, timing=False):
        lines = [f"suite={self.suite} seed={self.seed} tol={_fmt(self.tol)}"]
        width = max((len(c.name) for c in self.checks), default=0)
        for c in self.checks:
            tag = "PASS" if c.passed else "FAIL"
            prefix = f"{c.instance}: " if c.instance else ""
            line = f"{tag} {prefix}{c.name:<{width}} {_fmt(c.residual):>10} <= {_fmt(c.threshold)}"
            if timing:
                line += f" ({c.seconds:.3f}s)"
            if c.detail:
                line += f"  [{c.detail}]"
            lines.append(line)
        s = self.summary()
        lines.append(f"{s['verdict'].upper()}: {s['passed']}/{s['checks']} checks passed"
                     f" on {s['instances']} instance(s)")
        return "\n".join(lines)


class _Collector:
    def __init__(self, instance):
        self.instance = instance
        self.checks = []

    def run(self, name, threshold, fn):
        """Evaluate ``fn() -> (residual, detail)`` or ``fn() -> residual``."""
        t0 = time.perf_counter()
        try:
            out = fn()
            res, detail = out if isinstance(out, tuple) else (out, "")
            res = float(res)
            if math.isnan(res):
                res, detail = math.inf, detail or "nan residual"
        except Exception as exc:  # a failing check must not stop the suite
            res, detail = math.inf, f"{type(exc).__name__}: {exc}"
        self.checks.append(Check(name, res, threshold, self.instance, detail,
                                 time.perf_counter() - t0))

    def flag(self, name, ok, detail=""):
        """A yes/no check recorded as residual 0 or 1 against threshold 0."""
        self.run(name, 0.0, lambda: (0.0 if ok() else 1.0, detail))


def _max_over(points, f):
    vals = [f(p) for p in points]
    if not vals:
        raise TripletError("no sample points available")
    return max(vals)


def _subsample(points, k, rng):
    if len(points) <= k:
        return list(points)
    idx = np.sort(rng.choice(len(points), size=k, replace=False))
    return [points[i] for i in idx]


def _match_sets(a, b):
    """Largest nearest-neighbour distance between two point sets of equal size."""
    a, b = np.asarray(a, complex), np.asarray(b, complex)
    if a.size != b.size:
        return math.inf
    if a.size == 0:
        return 0.0
    left = max(np.min(np.abs(b - z)) for z in a)
    right = max(np.min(np.abs(a - z)) for z in b)
    return float(max(left, right))


def _default_taus(triplet, rng):
    """Parameters used when a file lists none: two operators and one random relation."""
    N1, N2 = triplet.N1, triplet.N2
    out = [("zero", LinearRelation.from_matrix(np.zeros((N1.dim, N2.dim)), N2, N1))]
    A = rng.standard_normal((N1.dim, N2.dim)) + 1j * rng.standard_normal((N1.dim, N2.dim))
    out.append(("random", LinearRelation.from_matrix(A, N2, N1)))
    return out


# -- check groups -----------------------------------------------------------
def _core_checks(c, f, t, taus, tol):
    inst = f.instance

    def isometric():
        D = inst.V.gram_difference()
        return float(np.linalg.norm(D, 2)) if D.size else 0.0

    c.run("instance-isometric", 10 * tol, isometric)
    rep = verify_triplet(t, GREEN_TOL)
    c.run("green-identity", GREEN_TOL, lambda: rep.green_residual)
    c.run("boundary-surjective", 0.0, lambda: (float(rep.expected_rank - rep.rank),
                                               f"rank {rep.rank}/{rep.expected_rank}"))
    c.run("boundary-kernel-is-V", SUBSPACE_TOL, lambda: rep.kernel_distance)
    c.run("boundary-index", 0.0,
          lambda: float(sum(abs(k - t.kappa1) for k in rep.neg_indices)))

    def v12():
        V1, V2 = kernel_extensions(t)
        W = V1.inverse().adjoint()
        return V2.distance(W) if V2.dim == W.dim else math.inf

    c.run("kernel-extensions-adjoint", SUBSPACE_TOL, v12)

    for name, tau in taus:
        corr = {}

        def get():
            if not corr:
                corr.update(classify_extension_correspondence(t, tau))
            return corr

        c.run(f"extension-adjoint/{name}", SUBSPACE_TOL, lambda: get()["adjoint"])

        def agree():
            d = get()
            bad = [k for k, v in d.items() if k != "adjoint" and v[0] != v[1]]
            return float(len(bad)), ",".join(bad)

        c.run(f"extension-class/{name}", 0.0, agree)


def _weyl_checks(c, f, t, ex, V12, rng, seed):
    inner, outer = inner_grid(ex), outer_grid(ex)
    pairs = {
        "outer": admissible_pairs(outer, outer, N_PAIRS, seed),
        "inner": admissible_pairs(inner, inner, N_PAIRS, seed + 1),
        "inner-outer": admissible_pairs(inner, outer, N_PAIRS, seed + 2),
        "outer-inner": admissible_pairs(outer, inner, N_PAIRS, seed + 3),
    }
    for key, ps in pairs.items():
        c.run(f"weyl-identity-{key}", IDENTITY_TOL,
              lambda ps=ps, key=key: _max_over(ps, lambda p: identity_residuals(t, *p)[key]))
    for j, pts in ((1, outer), (2, inner)):
        ps = admissible_pairs(pts, pts, N_PAIRS, seed + 4 + j)
        c.run(f"gamma-propagation-{j}", IDENTITY_TOL,
              lambda ps=ps, j=j: _max_over(
                  ps, lambda p: propagation_residual(t, j, p[0], p[1], V12[j - 1])))
    c.run("weyl-symmetry", SYMMETRY_TOL, lambda: _max_over(outer, lambda z: symmetry_residual(t, z)))
    for key in ("outer", "inner"):
        c.run(f"resolvent-boundary-image-{key}", IDENTITY_TOL,
              lambda key=key: _max_over(outer, lambda z: reflection_residuals(t, z, V12)[key]))

    kappa = f.instance.space.neg_index
    est = {}

    def count():
        if not est:
            est["e"] = max_neg_squares(lambda z: weyl(t, 2, z), inner, t.N2, t.N1, seed=seed)
        return est["e"].count

    c.run("weyl-neg-squares-bound", 0.0,
          lambda: (float(max(0, count() - kappa)), f"count {count()}, kappa {kappa}"))
    if is_simple(f.instance, inner + outer):
        c.run("weyl-neg-squares-simple", 0.0,
              lambda: (float(abs(count() - kappa)), f"count {count()}, kappa {kappa}"))

    if len(ex.Lambda1):
        rep = {}

        def poles():
            rep["r"] = pole_check(t)
            return 0.0 if rep["r"].passed else 1.0

        c.run("weyl-poles", 0.0, poles)

    def moebius():
        return moebius_context(t, Z0)

    ctx = {}

    def get_ctx():
        if not ctx:
            ctx["c"] = moebius()
        return ctx["c"]

    pts = _subsample(outer, N_POINTS // 2, rng) + _subsample(inner, N_POINTS - N_POINTS // 2, rng)
    for key in ("weyl", "gamma"):
        c.run(f"moebius-{key}-law", MOEBIUS_LAW_TOL,
              lambda key=key: _max_over(pts, lambda z: transform_laws(get_ctx(), z)[key]))


def _resolvent_checks(c, f, t, taus, ex, V12, rng):
    inner, outer = inner_grid(ex), outer_grid(ex)
    pts = _subsample(outer, N_POINTS, rng) + _subsample(inner, N_POINTS, rng)

    for name, tau in taus:
        forms = ["relation", "pair"]
        if tau.is_operator() and tau.is_everywhere_defined():
            forms.append("unitary")
        Vt = extension(t, tau)

        def regular(z, tau=tau):
            try:
                return point_class(t, tau, z) == PointClass.REGULAR
            except TripletError:
                return False

        reg = [z for z in pts if regular(z)]
        for form in forms:
            c.run(f"krein-{form}/{name}", RESOLVENT_TOL,
                  lambda form=form, tau=tau, reg=reg: _max_over(
                      reg, lambda z: rel_residual(krein_resolvent(t, tau, z, form, V12),
                                                  direct_resolvent(t, tau, z))))
        sreg = [z for z in inner if regular(1 / np.conj(z))
                and _regular_dual(t, tau, z)]
        sreg = _subsample(sreg, 4, rng)
        if sreg:
            c.run(f"krein-sharp/{name}", RESOLVENT_TOL,
                  lambda tau=tau, sreg=sreg: _max_over(
                      sreg, lambda z: sharp_consistency(t, tau, z)))

        def eig_match(tau=tau, Vt=Vt):
            spec = pencil_spectrum(Vt).eigenvalues
            worst = 0.0
            for region, inside in ((1, ex.in_D1), (2, ex.in_D2)):
                mine = boundary_eigenvalues(t, tau, region)
                ref = [z for z in spec if inside(z) and abs(z) > 1e-6]
                worst = max(worst, _match_sets(mine, ref))
            return worst

        c.run(f"boundary-eigenvalues/{name}", EIGEN_MATCH_TOL, eig_match)

        def kernels(tau=tau):
            found = [z for r in (1, 2) for z in boundary_eigenvalues(t, tau, r)]
            if not found:
                return 0.0, "no eigenvalues off the circle"
            return max(kernel_correspondence(t, tau, z) for z in found), ""

        c.run(f"eigenvector-boundary-values/{name}", 1e-6, kernels)


def _regular_dual(t, tau, z):
    try:
        tau_s = tau.adjoint().inverse()
        return point_class(t, tau_s, z) == PointClass.REGULAR
    except TripletError:
        return False


def _colligation_for(f, t, seed):
    if f.colligation is not None:
        return f.colligation
    return random_simple_colligation(1, 0, t.N2.dim, t.N1.dim, seed,
                                     input_space=t.N2, output_space=t.N1)


def _gres_checks(c, f, t, ex, V12, rng, seed):
    D = _colligation_for(f, t, seed)
    c.run("colligation-unitary", GREEN_TOL, lambda: verify_colligation(D).max_residual)
    lifted = lift_triplet(t, D.state)
    inner, outer = inner_grid(ex), outer_grid(ex)
    pts = _subsample(outer, N_POINTS, rng) + _subsample(inner, N_POINTS, rng)
    for key in ("gamma", "weyl"):
        c.run(f"lift-{key}-blocks", LIFT_TOL,
              lambda key=key: _max_over(pts, lambda z: lift_residuals(lifted, z)[key]))
    state = {}

    def Vt():
        if "Vt" not in state:
            state["Vt"] = exit_extension(lifted, D)
        return state["Vt"]

    def gres(points):
        def res(z):
            return rel_residual(generalized_resolvent(t, D, z, V12, ex),
                                compress(Vt(), z, lifted.exit))
        return _max_over(points, res)

    def cores(points):
        def res(z):
            lam = 1 / z
            return rel_residual(coresolvent(t, D, lam, V12),
                                compress_coresolvent(Vt(), lam, lifted.exit))
        return _max_over(points, res)

    o = _regular_points(lambda z: compress(Vt(), z, lifted.exit), outer)
    i = _regular_points(lambda z: compress(Vt(), z, lifted.exit), inner)
    o10, i10 = _subsample(o, N_POINTS, rng), _subsample(i, N_POINTS, rng)
    c.run("gres-outer", GRES_TOL, lambda: gres(o10))
    c.run("gres-inner", GRES_TOL, lambda: gres(i10))
    c.run("coresolvent-outer", GRES_TOL, lambda: cores(o10))
    c.run("coresolvent-inner", GRES_TOL, lambda: cores(i10))

    dec = {}

    def decompose():
        if not dec:
            dec["d"] = minimal_decompose(Vt(), lifted.exit, seed)
        return dec["d"]

    c.run("minimal-invariance", GREEN_TOL, lambda: decompose().invariance)
    simple = is_simple_colligation(D)
    c.run("minimal-iff-simple", 0.0,
          lambda: (float(decompose().is_minimal != simple),
                   f"simple={simple}, minimal={decompose().is_minimal}"))
    c.run("minimal-compression", MIN2_TOL,
          lambda: _max_over(o10[:3] + i10[:3], lambda z: minimal_compression_residual(Vt(), decompose(),
                                                                         lifted.exit, z)))

    def moebius_gres():
        ctx = moebius_context(t, Z0)
        Vm, exit = moebius_exit_extension(ctx, D.state, D)
        theta = moebius_theta(D, Z0)
        good = _regular_points(lambda z: compress(Vm, z, exit), o10[:3] + i10[:3])
        return _max_over(good, lambda z: rel_residual(
            gres_from_theta(t, theta, z, V12, ex), compress(Vm, z, exit)))

    c.run("moebius-gres", GRES_TOL, moebius_gres)

    def transfer():
        ctx = moebius_context(t, Z0)
        Vm, _ = moebius_exit_extension(ctx, D.state, D)
        good = _regular_points(lambda z: resolvent_transfer_residual(Vm, Z0, z), pts)
        return _max_over(good[:N_POINTS], lambda z: resolvent_transfer_residual(Vm, Z0, z))

    c.run("moebius-resolvent-transfer", MOEBIUS_RR_TOL, transfer)


def _regular_points(fn, points):
    out = []
    for z in points:
        try:
            fn(z)
            out.append(z)
        except TripletError:
            continue
    return out


# -- drivers ----------------------------------------------------------------
def run_checks(f, suite="all", seed=0, tol=None, kappa1=0):
    """All checks of ``suite`` for one :class:`InstanceFile`; returns a list of :class:`Check`."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    tol = get_tol(tol)
    if isinstance(f, IsometryInstance):
        f = InstanceFile(f)
    c = _Collector(f.label)
    rng = np.random.default_rng(seed)
    try:
        t = f.get_triplet(kappa1)
        ex = exceptional_sets(t)
        V12 = kernel_extensions(t)
    except Exception as exc:
        c.run("triplet-construction", 0.0, lambda err=exc: (_ for _ in ()).throw(err))
        return c.checks
    taus = f.taus or _default_taus(t, rng)
    groups = SUITES[:-1] if suite == "all" else (suite,)
    if "core" in groups:
        _core_checks(c, f, t, taus, tol)
    if "weyl" in groups:
        _weyl_checks(c, f, t, ex, V12, rng, seed)
    if "resolvent" in groups:
        _resolvent_checks(c, f, t, taus, ex, V12, rng)
    if "gres" in groups:
        _gres_checks(c, f, t, ex, V12, rng, seed)
    return c.checks


def _collect_files(target):
    """``(label, InstanceFile or exception)`` for a file, directory or instance."""
    if isinstance(target, (InstanceFile, IsometryInstance)):
        return [target]
    p = Path(target)
    paths = sorted(p.glob("*.json")) if p.is_dir() else [p]
    out = []
    for q in paths:
        try:
            out.append(parse_instance(q))
        except Exception as exc:
            out.append((q.stem, exc))
    return out


def run_suite(target, suite="all", seed=0, tol=None, kappa1=0):
    """Run ``suite`` on an instance, an instance file or a directory of files.

    Parameters
    ----------
    target : InstanceFile, IsometryInstance, str or Path
    suite : {"core", "weyl", "resolvent", "gres", "all"}
    seed : int
        Seeds point selection, default parameters and generated colligations.
    tol : float, optional

    Returns
    -------
    Report
    """
    tol = get_tol(tol)
    checks = []
    for item in _collect_files(target):
        if isinstance(item, tuple):
            label, exc = item
            checks.append(Check("parse", math.inf, 0.0, label, f"{type(exc).__name__}: {exc}"))
            continue
        checks.extend(run_checks(item, suite, seed, tol, kappa1))
    return Report(checks, suite, seed, tol)
