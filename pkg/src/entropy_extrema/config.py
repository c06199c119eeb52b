"""Numerical tolerances shared by every module.

Values are read at call time, so :func:`tolerances` can override them for a
block of code::

    with tolerances(ranktol=1e-7):
        ...
"""

from contextlib import contextmanager
from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    spectol: float = 1e-10    # Hermiticity / reconstruction
    ranktol: float = 1e-9     # rank and support cutoff
    normtol: float = 1e-12    # unit-norm checks
    comtol: float = 1e-9      # commutators, max-entry norm
    crittol: float = 1e-8     # vanishing first derivative
    certmargin: float = 1e-8  # strict margin for strong extrema

    @classmethod
    def names(cls):
        return [f.name for f in fields(cls)]


_current = Tolerances()


def get_tolerances():
    return _current


def set_tolerances(**overrides):
    """Replace the process-wide tolerances; returns the previous value."""
    global _current
    unknown = set(overrides) - set(Tolerances.names())
    if unknown:
        raise KeyError(f"unknown tolerance(s): {sorted(unknown)}")
    previous = _current
    _current = replace(_current, **{k: float(v) for k, v in overrides.items()})
    return previous


@contextmanager
def tolerances(**overrides):
    global _current
    previous = set_tolerances(**overrides)
    try:
        yield _current
    finally:
        _current = previous
