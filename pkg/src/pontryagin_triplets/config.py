"""Process-wide numerical tolerance."""
from contextlib import contextmanager

_STATE = {"tol": 1e-9}


def get_tol(tol=None):
    """Return ``tol`` if given, otherwise the global default."""
    return _STATE["tol"] if tol is None else float(tol)


def set_tol(value):
    _STATE["tol"] = float(value)


@contextmanager
def tolerance(value):
    """Temporarily override the global zero-test tolerance (``None`` keeps it)."""
    old = _STATE["tol"]
    if value is not None:
        _STATE["tol"] = float(value)
    try:
        yield
    finally:
        _STATE["tol"] = old
