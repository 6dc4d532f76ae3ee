"""Matching-network model: shunt short-circuited stub plus series line.

Everything here works on impedances normalized to the line impedance (Z0 = 1).
Lengths are fractions of a wavelength; ``tan(2*pi*l)`` repeats every half
wavelength, so lengths are reduced into ``[0, 0.5)``.

The line transform is evaluated in homogeneous form (numerator/denominator
scaled by ``cos``) so that quarter-wave lengths, where ``tan`` blows up, give
the correct finite limit instead of an overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SingularTransformError

HALF_WAVE = 0.5


def canonicalize(raw: float) -> float:
    """Reduce a length in wavelengths into ``[0, 0.5)``."""
    raw = float(raw)
    if not math.isfinite(raw):
        raise ValueError(f"length must be finite, got {raw}")
    v = math.fmod(raw, HALF_WAVE)
    if v < 0:
        v += HALF_WAVE
    # -tiny + 0.5 rounds to exactly 0.5
    if v >= HALF_WAVE:
        v = 0.0
    return v


def _cos_sin(length: float) -> tuple[float, float]:
    """cos/sin of 2*pi*length, exact at multiples of an eighth wavelength."""
    eighths = length * 8.0
    if eighths == round(eighths):
        k = int(round(eighths)) % 8
        r = math.sqrt(0.5)
        return (
            (1.0, 0.0), (r, r), (0.0, 1.0), (-r, r),
            (-1.0, 0.0), (-r, -r), (0.0, -1.0), (r, -r),
        )[k]
    theta = 2.0 * math.pi * length
    return math.cos(theta), math.sin(theta)


@dataclass(frozen=True)
class DesignVector:
    """Four matching lengths in wavelengths, canonicalized on construction.

    ``d1``/``d2`` are the series lines, ``l1``/``l2`` the shunt stubs, on the
    source and load side respectively.
    """

    d1: float
    l1: float
    d2: float
    l2: float

    def __post_init__(self):
        for name in ("d1", "l1", "d2", "l2"):
            object.__setattr__(self, name, canonicalize(getattr(self, name)))

    @classmethod
    def from_degrees(cls, d1, l1, d2, l2) -> "DesignVector":
        return cls(d1 / 360.0, l1 / 360.0, d2 / 360.0, l2 / 360.0)

    @classmethod
    def from_array(cls, x) -> "DesignVector":
        d1, l1, d2, l2 = (float(v) for v in x)
        return cls(d1, l1, d2, l2)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.d1, self.l1, self.d2, self.l2)

    def degrees(self) -> tuple[float, float, float, float]:
        return tuple(v * 360.0 for v in self.as_tuple())

    def scaled(self, ratio: float) -> "DesignVector":
        """Electrical lengths at ``ratio`` times the design frequency."""
        return DesignVector(*(v * ratio for v in self.as_tuple()))


STUB_KINDS = ("short", "open")


def stub_parallel_impedance(l: float, stub: str = "short") -> complex:
    """Unit termination in parallel with a stub of length ``l``.

    Shorted stub: ``jt / (1 + jt)`` with ``t = tan(2*pi*l)``; multiplying
    through by ``cos`` gives ``sin^2 + j sin cos``, finite everywhere and 1 at
    the quarter-wave point. Open stub (reactance ``-cot``): ``cos^2 - j sin cos``.
    """
    c, s = _cos_sin(l)
    if stub == "short":
        return complex(s * s, s * c)
    if stub == "open":
        return complex(c * c, -s * c)
    raise ValueError(f"stub must be one of {STUB_KINDS}, got {stub!r}")


def _line_homogeneous(z_load: complex, d: float) -> tuple[complex, complex]:
    c, s = _cos_sin(d)
    r, x = z_load.real, z_load.imag
    num = complex(r * c, s + x * c)
    den = complex(c - x * s, r * s)
    return num, den


def line_transform(z_load: complex, d: float) -> complex:
    """Input impedance of a length-``d`` unit line terminated in ``z_load``."""
    z_load = complex(z_load)
    if not (math.isfinite(z_load.real) and math.isfinite(z_load.imag)):
        raise SingularTransformError(f"non-finite load impedance {z_load}")
    num, den = _line_homogeneous(z_load, d)
    if abs(num) < 1e-15 and abs(den) < 1e-15:
        raise SingularTransformError("degenerate line transform (0/0)")
    if den == 0:
        raise SingularTransformError(f"line of length {d} turns {z_load} into an open circuit")
    z = num / den
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise SingularTransformError(f"line transform overflow for {z_load}, d={d}")
    return z


def reflection_from_impedance(z: complex) -> complex:
    z = complex(z)
    if abs(z + 1.0) < 1e-15:
        raise SingularTransformError("impedance -1 has no reflection coefficient")
    return (z - 1.0) / (z + 1.0)


def _side_reflection(d: float, l: float, stub: str) -> complex:
    # Gamma straight from the homogeneous pair, so an open circuit
    # (den == 0) still lands on |Gamma| = 1.
    zp = stub_parallel_impedance(canonicalize(l), stub)
    num, den = _line_homogeneous(zp, canonicalize(d))
    total = num + den
    if abs(total) < 1e-15:
        raise SingularTransformError("reflection coefficient pole")
    return (num - den) / total


def source_reflection(d1: float, l1: float, stub: str = "short") -> complex:
    """Reflection coefficient the transistor input sees toward the source."""
    return _side_reflection(d1, l1, stub)


def load_reflection(d2: float, l2: float, stub: str = "short") -> complex:
    """Reflection coefficient the transistor output sees toward the load."""
    return _side_reflection(d2, l2, stub)
