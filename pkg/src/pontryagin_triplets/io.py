"""JSON instance files and the bundled fixture registry.

Complex numbers are ``[re, im]`` pairs, matrices are row-major lists of
rows and subspaces are lists of spanning vectors.  A file looks like::

    {
      "label": "shift2", "seed": 0,
      "space": {"dim": 2, "gram": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]},
      "V": {"domain": [[[1, 0], [0, 0]]], "images": [[[0, 0], [1, 0]]]},
      "triplet": {"N1": ..., "N2": ..., "Gamma1": ..., "Gamma2": ...},
      "tau": [{"label": "graph-4", "first": [...], "second": [...]}],
      "colligation": {"state": ..., "U": ...}
    }

``V`` maps ``domain[i]`` to ``images[i]``.  Each ``tau`` entry is a
relation from ``N2`` to ``N1`` given by pairs ``(first[i], second[i])``
or by a ``"matrix"``.  ``triplet`` overrides the constructed boundary
triplet with matrices ``Gamma_j`` acting on ``C^{2n}``.  All of
``triplet``, ``tau`` and ``colligation`` are optional.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .boundary import BoundaryTriplet, IsometryInstance, construct_triplet
from .core import PontryaginSpace
from .exceptions import InvalidGram, SchemaError, TripletError
from .relations import LinearRelation

__all__ = [
    "InstanceFile", "parse_instance", "load_instance", "dump_instance",
    "instance_to_dict", "fixture_names", "fixture_path", "load_fixture",
    "encode_matrix", "decode_matrix",
]


# -- encoding ---------------------------------------------------------------
def _encode_scalar(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


def encode_matrix(A):
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    return [[_encode_scalar(z) for z in row] for row in A]


def encode_vectors(B):
    """Columns of ``B`` as a list of vectors."""
    B = np.asarray(B, dtype=complex)
    return [[_encode_scalar(z) for z in col] for col in B.T]


def _decode_scalar(x, where, errors):
    if (isinstance(x, (list, tuple)) and len(x) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x)):
        return complex(x[0], x[1])
    errors.append(f"{where}: expected [re, im], got {x!r}")
    return 0j


def decode_matrix(data, where="matrix", errors=None, shape=None):
    """Decode a row-major matrix; problems are appended to ``errors``."""
    own = errors is None
    errors = [] if own else errors
    if not isinstance(data, list) or any(not isinstance(r, list) for r in data):
        errors.append(f"{where}: expected a list of rows")
        out = np.zeros(shape or (0, 0), dtype=complex)
    elif len({len(r) for r in data}) > 1:
        errors.append(f"{where}: rows have different lengths")
        out = np.zeros(shape or (0, 0), dtype=complex)
    else:
        ncol = len(data[0]) if data else (shape[1] if shape else 0)
        out = np.array([[_decode_scalar(x, f"{where}[{i}][{j}]", errors)
                         for j, x in enumerate(r)] for i, r in enumerate(data)],
                       dtype=complex).reshape(len(data), ncol)
        if shape is not None and out.shape != tuple(shape):
            errors.append(f"{where}: expected shape {tuple(shape)}, got {out.shape}")
            out = np.zeros(shape, dtype=complex)
    if own and errors:
        raise SchemaError(f"invalid {where}", errors)
    return out


def _decode_vectors(data, dim, where, errors):
    """A list of vectors of length ``dim`` as the columns of a matrix."""
    if not isinstance(data, list):
        errors.append(f"{where}: expected a list of vectors")
        return np.zeros((dim, 0), dtype=complex)
    M = decode_matrix(data, where, errors, shape=(len(data), dim) if data else (0, dim))
    return M.T


def _decode_gram(data, where, errors):
    G = decode_matrix(data, where, errors)
    if G.shape[0] != G.shape[1]:
        errors.append(f"{where}: Gram matrix must be square, got {G.shape}")
        return None
    try:
        return PontryaginSpace(G)
    except InvalidGram as exc:
        errors.append(f"{where}: {exc}")
        return None


# -- file model -------------------------------------------------------------
@dataclass
class InstanceFile:
    """A parsed instance file.

    Attributes
    ----------
    instance : IsometryInstance
    triplet : BoundaryTriplet or None
        The override from the file, if any.
    taus : list of (str, LinearRelation)
    colligation : UnitaryColligation or None
    seed : int or None
    """

    instance: IsometryInstance
    triplet: BoundaryTriplet | None = None
    taus: list = field(default_factory=list)
    colligation: object = None
    seed: int | None = None
    path: str | None = None

    @property
    def label(self):
        return self.instance.label

    def get_triplet(self, kappa1=0):
        """The file's triplet, or a constructed one when none is given."""
        if self.triplet is not None:
            return self.triplet
        return construct_triplet(self.instance, kappa1)

    def tau(self, label):
        for name, rel in self.taus:
            if name == label:
                return rel
        raise KeyError(label)


def _require(d, key, where, errors, kind=None):
    if not isinstance(d, dict) or key not in d:
        errors.append(f"{where}: missing key {key!r}")
        return None
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        errors.append(f"{where}.{key}: expected {kind.__name__}")
        return None
    return v


def instance_from_dict(data, path=None):
    """Validate a decoded JSON object and build an :class:`InstanceFile`.

    Raises
    ------
    SchemaError
        With the full list of problems found.
    NonIsometric
        If ``V`` does not preserve the inner product.
    """
    from .colligations import UnitaryColligation

    errors = []
    if not isinstance(data, dict):
        raise SchemaError("instance file must hold a JSON object", ["top level: not an object"])
    known = {"label", "seed", "space", "V", "triplet", "tau", "colligation", "metadata"}
    for k in data:
        if k not in known:
            errors.append(f"unknown key {k!r}")
    label = data.get("label", "")
    if not isinstance(label, str):
        errors.append("label: expected a string")
        label = ""
    seed = data.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        errors.append("seed: expected an integer")
        seed = None

    sp = _require(data, "space", "top level", errors, dict)
    space = None
    if sp is not None:
        dim = _require(sp, "dim", "space", errors, int)
        gram = _require(sp, "gram", "space", errors, list)
        if gram is not None:
            space = _decode_gram(gram, "space.gram", errors)
            if space is not None and dim is not None and space.dim != dim:
                errors.append(f"space: dim {dim} does not match Gram size {space.dim}")
                space = None
    if space is None:
        raise SchemaError("invalid instance file", errors or ["space: unusable"])
    n = space.dim

    v = _require(data, "V", "top level", errors, dict)
    dom = img = None
    if v is not None:
        dom = _decode_vectors(_require(v, "domain", "V", errors, list) or [], n, "V.domain", errors)
        img = _decode_vectors(_require(v, "images", "V", errors, list) or [], n, "V.images", errors)
        if dom.shape != img.shape:
            errors.append("V: domain and images must have the same number of vectors")

    N1 = N2 = None
    tdata = data.get("triplet")
    A1 = A2 = None
    if tdata is not None:
        if not isinstance(tdata, dict):
            errors.append("triplet: expected an object")
        else:
            g1 = _require(tdata, "N1", "triplet", errors, list)
            g2 = _require(tdata, "N2", "triplet", errors, list)
            N1 = _decode_gram(g1, "triplet.N1", errors) if g1 is not None else None
            N2 = _decode_gram(g2, "triplet.N2", errors) if g2 is not None else None
            if N1 is not None and N2 is not None:
                a1 = _require(tdata, "Gamma1", "triplet", errors, list)
                a2 = _require(tdata, "Gamma2", "triplet", errors, list)
                if a1 is not None:
                    A1 = decode_matrix(a1, "triplet.Gamma1", errors, shape=(N1.dim, 2 * n))
                if a2 is not None:
                    A2 = decode_matrix(a2, "triplet.Gamma2", errors, shape=(N2.dim, 2 * n))

    raw_taus = data.get("tau", [])
    if not isinstance(raw_taus, list):
        errors.append("tau: expected a list")
        raw_taus = []

    cdata = data.get("colligation")
    if errors:
        raise SchemaError("invalid instance file", errors)

    inst = IsometryInstance.from_map(space, dom, img, label=label)
    triplet = None
    if tdata is not None:
        triplet = BoundaryTriplet.from_ambient(inst, A1, A2, N1, N2)
    else:
        try:
            triplet_spaces = construct_triplet(inst)
            N1, N2 = triplet_spaces.N1, triplet_spaces.N2
        except TripletError:
            N1 = N2 = None

    taus = []
    for i, t in enumerate(raw_taus):
        where = f"tau[{i}]"
        if not isinstance(t, dict):
            errors.append(f"{where}: expected an object")
            continue
        name = t.get("label", f"tau{i}")
        if N1 is None:
            errors.append(f"{where}: boundary spaces are unavailable")
            continue
        if "matrix" in t:
            A = decode_matrix(t["matrix"], f"{where}.matrix", errors, shape=(N1.dim, N2.dim))
            taus.append((name, LinearRelation.from_matrix(A, N2, N1)))
        elif "first" in t and "second" in t:
            f = _decode_vectors(t["first"], N2.dim, f"{where}.first", errors)
            s = _decode_vectors(t["second"], N1.dim, f"{where}.second", errors)
            if f.shape[1] != s.shape[1]:
                errors.append(f"{where}: first and second differ in length")
                continue
            taus.append((name, LinearRelation.from_pairs(f, s, N2, N1)))
        else:
            errors.append(f"{where}: needs 'matrix' or 'first'/'second'")

    coll = None
    if cdata is not None:
        if not isinstance(cdata, dict) or N1 is None:
            errors.append("colligation: expected an object and a valid triplet")
        else:
            st = _require(cdata, "state", "colligation", errors, list)
            state = _decode_gram(st, "colligation.state", errors) if st is not None else None
            u = _require(cdata, "U", "colligation", errors, list)
            if state is not None and u is not None:
                p = state.dim
                U = decode_matrix(u, "colligation.U", errors, shape=(p + N1.dim, p + N2.dim))
                coll = UnitaryColligation(state, N2, N1, U)
    if errors:
        raise SchemaError("invalid instance file", errors)
    return InstanceFile(inst, triplet, taus, coll, seed, None if path is None else str(path))


def parse_instance(path):
    """Read and validate an instance file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}", [str(exc)]) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON", [str(exc)]) from None
    return instance_from_dict(data, path)


load_instance = parse_instance


def instance_to_dict(inst, triplet=None, taus=(), colligation=None, seed=None):
    """Inverse of :func:`instance_from_dict`.

    ``V`` is written through its orthonormal graph basis, so a round trip
    reproduces the relation but not the original spanning vectors.
    """
    out = {"label": inst.label}
    if seed is not None:
        out["seed"] = int(seed)
    out["space"] = {"dim": inst.dim, "gram": encode_matrix(inst.space.gram)}
    out["V"] = {"domain": encode_vectors(inst.V.X), "images": encode_vectors(inst.V.Y)}
    if triplet is not None:
        out["triplet"] = {
            "N1": encode_matrix(triplet.N1.gram), "N2": encode_matrix(triplet.N2.gram),
            "Gamma1": encode_matrix(triplet.ambient(1)), "Gamma2": encode_matrix(triplet.ambient(2)),
        }
    if taus:
        out["tau"] = [{"label": name, "first": encode_vectors(rel.X),
                       "second": encode_vectors(rel.Y)} for name, rel in taus]
    if colligation is not None:
        out["colligation"] = {"state": encode_matrix(colligation.state.gram),
                              "U": encode_matrix(colligation.U)}
    return out


def dump_instance(path, inst, **kwargs):
    Path(path).write_text(json.dumps(instance_to_dict(inst, **kwargs), indent=1) + "\n")


# -- fixtures ---------------------------------------------------------------
def _fixture_dir():
    return resources.files(__package__) / "fixtures"


def fixture_names():
    return sorted(p.name[:-5] for p in _fixture_dir().iterdir() if p.name.endswith(".json"))


def fixture_path(name):
    name = name[:-5] if name.endswith(".json") else name
    p = _fixture_dir() / f"{name}.json"
    if not p.is_file():
        raise KeyError(f"no fixture named {name!r}; have {fixture_names()}")
    return Path(str(p))


def load_fixture(name):
    return parse_instance(fixture_path(name))
