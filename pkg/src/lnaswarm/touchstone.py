"""Two-port Touchstone (v1) reader/writer and frequency interpolation.

Only the subset needed for amplifier design is handled: a single option line,
nine-column S-parameter rows in the standard ``S11 S21 S12 S22`` order, and the
classic five-column noise block (``freq Fmin[dB] |Gopt| ang(Gopt)[deg] rn/Z0``).
"""

from __future__ import annotations

import bisect
import cmath
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import FrequencyRangeError, MissingNoiseDataError, TouchstoneError

FREQ_UNITS = {"HZ": 1.0, "KHZ": 1e3, "MHZ": 1e6, "GHZ": 1e9}
FORMATS = ("MA", "RI", "DB")


@dataclass(frozen=True)
class SParameters:
    s11: complex
    s12: complex
    s21: complex
    s22: complex

    def __post_init__(self):
        for name in ("s11", "s12", "s21", "s22"):
            v = complex(getattr(self, name))
            if not cmath.isfinite(v):
                raise ValueError(f"{name} is not finite: {v}")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class NoiseParameters:
    """Device noise parameters. ``f_min`` is linear, ``r_n`` in ohms."""

    f_min: float
    gamma_opt: complex
    r_n: float

    def __post_init__(self):
        object.__setattr__(self, "gamma_opt", complex(self.gamma_opt))
        if not self.f_min >= 1.0:
            raise ValueError(f"f_min must be >= 1 (linear), got {self.f_min}")
        if not abs(self.gamma_opt) < 1.0:
            raise ValueError(f"|gamma_opt| must be < 1, got {abs(self.gamma_opt)}")
        if not self.r_n >= 0.0:
            raise ValueError(f"r_n must be >= 0, got {self.r_n}")

    @property
    def f_min_db(self) -> float:
        return 10.0 * math.log10(self.f_min)


@dataclass(frozen=True)
class DeviceDataPoint:
    frequency: float
    s: SParameters
    noise: NoiseParameters | None = None

    def __post_init__(self):
        if not (math.isfinite(self.frequency) and self.frequency > 0):
            raise ValueError(f"frequency must be > 0, got {self.frequency}")


@dataclass(frozen=True)
class DeviceData:
    name: str
    points: tuple[DeviceDataPoint, ...]
    reference_impedance: float = 50.0

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not self.points:
            raise ValueError("device data needs at least one point")
        if not self.reference_impedance > 0:
            raise ValueError("reference impedance must be positive")
        freqs = self.frequencies
        for a, b in zip(freqs, freqs[1:]):
            if not b > a:
                raise ValueError(f"frequencies not strictly increasing at {b} Hz")

    @property
    def frequencies(self) -> list[float]:
        return [p.frequency for p in self.points]

    @property
    def f_range(self) -> tuple[float, float]:
        return self.points[0].frequency, self.points[-1].frequency

    @property
    def has_noise(self) -> bool:
        return any(p.noise is not None for p in self.points)


# ---------------------------------------------------------------------------
# parsing


def _to_complex(a: float, b: float, fmt: str) -> complex:
    if fmt == "RI":
        return complex(a, b)
    if fmt == "DB":
        a = 10.0 ** (a / 20.0)
    return cmath.rect(a, math.radians(b))


def _parse_option_line(tokens: list[str], lineno: int) -> tuple[float, str, float]:
    unit, fmt, z0 = "GHZ", "MA", 50.0
    it = iter(t.upper() for t in tokens)
    for tok in it:
        if tok in FREQ_UNITS:
            unit = tok
        elif tok in FORMATS:
            fmt = tok
        elif tok == "S":
            pass
        elif tok in ("Y", "Z", "H", "G"):
            raise TouchstoneError(f"unsupported parameter type {tok!r}, only S", lineno)
        elif tok == "R":
            try:
                z0 = float(next(it))
            except (StopIteration, ValueError):
                raise TouchstoneError("malformed option line: R needs a number", lineno) from None
            if not (math.isfinite(z0) and z0 > 0):
                raise TouchstoneError(f"malformed option line: bad reference impedance {z0}", lineno)
        else:
            raise TouchstoneError(f"malformed option line: unsupported token {tok!r}", lineno)
    return FREQ_UNITS[unit], fmt, z0


def _floats(fields: list[str], lineno: int) -> list[float]:
    try:
        vals = [float(x) for x in fields]
    except ValueError as exc:
        raise TouchstoneError(f"non-numeric field ({exc})", lineno) from None
    if not all(math.isfinite(v) for v in vals):
        raise TouchstoneError("non-finite value", lineno)
    return vals


def parse_device_file(text: str | Iterable[str], name: str = "device") -> DeviceData:
    """Parse two-port Touchstone text into :class:`DeviceData`.

    Noise rows must sit at frequencies that also carry an S-parameter row.
    All problems raise :class:`TouchstoneError` tagged with the line number.
    """
    lines = text.splitlines() if isinstance(text, str) else list(text)
    scale = None
    fmt = "MA"
    z0 = 50.0
    s_rows: list[tuple[float, SParameters, int]] = []
    noise_rows: list[tuple[float, tuple[float, float, float, float], int]] = []

    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("!", 1)[0].strip()
        if not line:
            continue
        if line.startswith("#"):
            if scale is not None:
                raise TouchstoneError("second option line", lineno)
            scale, fmt, z0 = _parse_option_line(line[1:].split(), lineno)
            continue
        if scale is None:
            raise TouchstoneError("data row before option line", lineno)
        fields = line.split()
        if len(fields) == 9:
            if noise_rows:
                raise TouchstoneError("S-parameter row after noise block", lineno)
            v = _floats(fields, lineno)
            f = v[0] * scale
            if s_rows and not f > s_rows[-1][0]:
                raise TouchstoneError(f"non-monotone frequency {v[0]}", lineno)
            s11 = _to_complex(v[1], v[2], fmt)
            s21 = _to_complex(v[3], v[4], fmt)
            s12 = _to_complex(v[5], v[6], fmt)
            s22 = _to_complex(v[7], v[8], fmt)
            s_rows.append((f, SParameters(s11, s12, s21, s22), lineno))
        elif len(fields) == 5:
            v = _floats(fields, lineno)
            f = v[0] * scale
            if noise_rows and not f > noise_rows[-1][0]:
                raise TouchstoneError(f"non-monotone noise frequency {v[0]}", lineno)
            if not v[2] < 1.0 or v[2] < 0:
                raise TouchstoneError(f"|Gamma_opt| = {v[2]} outside [0, 1)", lineno)
            if v[1] < 0 or v[4] < 0:
                raise TouchstoneError("negative Fmin or noise resistance", lineno)
            noise_rows.append((f, (v[1], v[2], v[3], v[4]), lineno))
        else:
            raise TouchstoneError(
                f"expected 9 fields (S-parameter row) or 5 fields (noise row), got {len(fields)}",
                lineno,
            )

    # whole-file problems point at the end of input
    eof = max(len(lines), 1)
    if scale is None:
        raise TouchstoneError("missing option line (end of input)", eof)
    if not s_rows:
        raise TouchstoneError("no S-parameter data (end of input)", eof)

    freqs = [f for f, _, _ in s_rows]
    noise_at: dict[int, NoiseParameters] = {}
    for f, (fmin_db, mag, ang, rn_norm), lineno in noise_rows:
        i = bisect.bisect_left(freqs, f)
        match = None
        for j in (i - 1, i):
            if 0 <= j < len(freqs) and math.isclose(freqs[j], f, rel_tol=1e-9):
                match = j
        if match is None:
            raise TouchstoneError(f"noise frequency {f:g} Hz has no S-parameter row", lineno)
        noise_at[match] = NoiseParameters(
            f_min=10.0 ** (fmin_db / 10.0),
            gamma_opt=cmath.rect(mag, math.radians(ang)),
            r_n=rn_norm * z0,
        )

    points = tuple(
        DeviceDataPoint(f, s, noise_at.get(i)) for i, (f, s, _) in enumerate(s_rows)
    )
    return DeviceData(name=name, points=points, reference_impedance=z0)


def load_device(path: str | Path) -> DeviceData:
    path = Path(path)
    return parse_device_file(path.read_text(), name=path.stem)


# ---------------------------------------------------------------------------
# serialization


def _r(x: float) -> str:
    return repr(float(x))


def serialize_device(device: DeviceData) -> str:
    """Emit Touchstone text in ``# HZ S RI`` form; noise rows only if present."""
    z0 = device.reference_impedance
    out = [f"! {device.name}", f"# HZ S RI R {_r(z0)}"]
    for p in device.points:
        s = p.s
        vals = [p.frequency]
        for c in (s.s11, s.s21, s.s12, s.s22):
            vals += [c.real, c.imag]
        out.append(" ".join(_r(v) for v in vals))
    noisy = [p for p in device.points if p.noise is not None]
    if noisy:
        out.append("! noise: freq Fmin[dB] |Gopt| ang(Gopt)[deg] rn/Z0")
        for p in noisy:
            n = p.noise
            out.append(
                " ".join(
                    _r(v)
                    for v in (
                        p.frequency,
                        n.f_min_db,
                        abs(n.gamma_opt),
                        math.degrees(cmath.phase(n.gamma_opt)),
                        n.r_n / z0,
                    )
                )
            )
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# interpolation


def _lerp(a, b, t):
    return a + (b - a) * t


def _bracket(freqs: list[float], f: float) -> tuple[int, int, float]:
    i = bisect.bisect_left(freqs, f)
    if i < len(freqs) and freqs[i] == f:
        return i, i, 0.0
    lo, hi = i - 1, i
    return lo, hi, (f - freqs[lo]) / (freqs[hi] - freqs[lo])


def device_at(
    device: DeviceData, frequency: float, require_noise: bool = True
) -> tuple[SParameters, NoiseParameters | None]:
    """S-parameters and noise parameters at ``frequency``.

    Tabulated frequencies return stored values untouched; anything else is
    linear in real/imaginary parts between the bracketing points. Noise is
    interpolated over the points that carry noise data, which may be a subset.
    """
    fmin, fmax = device.f_range
    if not (fmin <= frequency <= fmax):
        raise FrequencyRangeError(
            f"{frequency:g} Hz outside tabulated range [{fmin:g}, {fmax:g}] Hz"
        )
    pts = device.points
    lo, hi, t = _bracket(device.frequencies, frequency)
    if lo == hi:
        s = pts[lo].s
    else:
        a, b = pts[lo].s, pts[hi].s
        s = SParameters(
            _lerp(a.s11, b.s11, t),
            _lerp(a.s12, b.s12, t),
            _lerp(a.s21, b.s21, t),
            _lerp(a.s22, b.s22, t),
        )

    noisy = [p for p in pts if p.noise is not None]
    noise = None
    if noisy and noisy[0].frequency <= frequency <= noisy[-1].frequency:
        nlo, nhi, nt = _bracket([p.frequency for p in noisy], frequency)
        if nlo == nhi:
            noise = noisy[nlo].noise
        else:
            a, b = noisy[nlo].noise, noisy[nhi].noise
            noise = NoiseParameters(
                f_min=_lerp(a.f_min, b.f_min, nt),
                gamma_opt=_lerp(a.gamma_opt, b.gamma_opt, nt),
                r_n=_lerp(a.r_n, b.r_n, nt),
            )
    if noise is None and require_noise:
        raise MissingNoiseDataError(f"no noise data covering {frequency:g} Hz in {device.name!r}")
    return s, noise
