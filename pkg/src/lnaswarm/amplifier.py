"""Single-stage amplifier figures of merit for given terminations."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DegenerateCircleError,
    EmptyCircleError,
    NoiseFigureUndefinedError,
    SingularError,
    SingularGainError,
    SingularTransformError,
)
from .network import DesignVector, load_reflection, source_reflection
from .touchstone import NoiseParameters, SParameters


def to_db(x: float) -> float:
    """Power ratio to dB; 0 maps to -inf."""
    if x == 0:
        return -math.inf
    return 10.0 * math.log10(x)


def from_db(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def mag_db(x: complex) -> float:
    """Magnitude of a wave ratio in dB (20 log10)."""
    m = abs(x)
    return -math.inf if m == 0 else 20.0 * math.log10(m)


@dataclass(frozen=True)
class SourceAdmittance:
    y: complex

    @property
    def g_s(self) -> float:
        return self.y.real

    @property
    def b_s(self) -> float:
        return self.y.imag


@dataclass(frozen=True)
class NoiseCircle:
    center: complex
    radius: float
    f_target_db: float

    def contains(self, gamma: complex, tol: float = 1e-12) -> bool:
        return abs(complex(gamma) - self.center) <= self.radius + tol

    def boundary(self, samples: int) -> list[complex]:
        if self.radius == 0:
            return [self.center]
        return [
            self.center + self.radius * complex(math.cos(t), math.sin(t))
            for t in (2 * math.pi * k / samples for k in range(samples))
        ]


@dataclass(frozen=True)
class AmplifierMetrics:
    """Figures of merit of one design at one frequency.

    ``defined`` is False when some quantity hit a pole (fully reflective
    source, oscillation boundary); the affected fields are then NaN/inf.
    ``amp_s11``/``amp_s22`` are the magnitudes of the complete amplifier's
    port reflections, seen from the 50-ohm ports through the lossless
    matching networks.
    """

    gain_linear: float
    gain_db: float
    noise_figure_linear: float
    noise_figure_db: float
    gamma_s: complex
    gamma_l: complex
    gamma_in: complex
    gamma_out: complex
    amp_s11: float
    amp_s22: float
    defined: bool = True


def transducer_gain(s: SParameters, gamma_s: complex, gamma_l: complex) -> float:
    num = abs(s.s21) ** 2 * (1 - abs(gamma_s) ** 2) * (1 - abs(gamma_l) ** 2)
    den = abs((1 - s.s11 * gamma_s) * (1 - s.s22 * gamma_l) - s.s12 * s.s21 * gamma_s * gamma_l) ** 2
    if den <= 1e-30:
        raise SingularGainError("transducer gain denominator vanishes (oscillation boundary)")
    return num / den


def input_reflection(s: SParameters, gamma_l: complex) -> complex:
    den = 1 - s.s22 * gamma_l
    if abs(den) <= 1e-15:
        raise SingularGainError("1 - S22*GammaL vanishes")
    return s.s11 + s.s12 * s.s21 * gamma_l / den


def output_reflection(s: SParameters, gamma_s: complex) -> complex:
    den = 1 - s.s11 * gamma_s
    if abs(den) <= 1e-15:
        raise SingularGainError("1 - S11*GammaS vanishes")
    return s.s22 + s.s12 * s.s21 * gamma_s / den


def _admittance(gamma: complex, z0: float) -> complex:
    return (1 - gamma) / (1 + gamma) / z0


def source_admittance(gamma_s: complex, z0: float) -> SourceAdmittance:
    gamma_s = complex(gamma_s)
    if abs(1 + gamma_s) <= 1e-15:
        raise SingularTransformError("short-circuit source has no finite admittance")
    return SourceAdmittance(_admittance(gamma_s, z0))


def noise_figure(n: NoiseParameters, gamma_s: complex, z0: float) -> float:
    """Linear noise figure for source reflection ``gamma_s``."""
    gamma_s = complex(gamma_s)
    if not abs(gamma_s) < 1:
        raise NoiseFigureUndefinedError(f"|Gamma_s| = {abs(gamma_s)} >= 1")
    ys = source_admittance(gamma_s, z0)
    y_opt = _admittance(n.gamma_opt, z0)
    if ys.g_s <= 0:
        raise NoiseFigureUndefinedError("non-positive source conductance")
    return n.f_min + n.r_n / ys.g_s * abs(ys.y - y_opt) ** 2


def noise_circle(n: NoiseParameters, f_target_db: float, z0: float) -> NoiseCircle:
    f_target = from_db(f_target_db)
    excess = f_target - n.f_min
    # rounding in the dB round trip must not turn "at f_min" into "below"
    if excess < 0 and excess > -1e-12 * n.f_min:
        excess = 0.0
    if excess < 0:
        raise EmptyCircleError(
            f"target {f_target_db:.4f} dB is below the device minimum {n.f_min_db:.4f} dB"
        )
    if excess == 0:
        return NoiseCircle(n.gamma_opt, 0.0, f_target_db)
    if n.r_n == 0:
        raise DegenerateCircleError(
            "zero noise resistance: every passive source meets the target"
        )
    big_n = excess * abs(1 + n.gamma_opt) ** 2 * z0 / (4 * n.r_n)
    center = n.gamma_opt / (1 + big_n)
    radius = math.sqrt(big_n**2 + big_n * (1 - abs(n.gamma_opt) ** 2)) / (1 + big_n)
    return NoiseCircle(center, radius, f_target_db)


def mismatch_reflection(gamma_match: complex, gamma_device: complex) -> float:
    """|reflection| at the outer port of a lossless matching network.

    ``gamma_match`` is what the network presents to the device; the device
    port itself reflects ``gamma_device``.
    """
    den = abs(1 - gamma_match * gamma_device)
    if den == 0:
        return math.inf
    return abs(gamma_device - gamma_match.conjugate()) / den


def metrics_from_reflections(
    s: SParameters,
    n: NoiseParameters | None,
    gamma_s: complex,
    gamma_l: complex,
    z0: float,
) -> AmplifierMetrics:
    defined = True
    nan = float("nan")
    try:
        g = transducer_gain(s, gamma_s, gamma_l)
    except SingularError:
        g, defined = nan, False
    try:
        gin = input_reflection(s, gamma_l)
    except SingularError:
        gin, defined = complex(nan, nan), False
    try:
        gout = output_reflection(s, gamma_s)
    except SingularError:
        gout, defined = complex(nan, nan), False
    if n is None:
        f = nan
    else:
        try:
            f = noise_figure(n, gamma_s, z0)
        except SingularError:
            f, defined = math.inf, False
    return AmplifierMetrics(
        gain_linear=g,
        gain_db=to_db(g) if g == g else nan,
        noise_figure_linear=f,
        noise_figure_db=to_db(f) if f == f else nan,
        gamma_s=gamma_s,
        gamma_l=gamma_l,
        gamma_in=gin,
        gamma_out=gout,
        amp_s11=mismatch_reflection(gamma_s, gin) if gin == gin else nan,
        amp_s22=mismatch_reflection(gamma_l, gout) if gout == gout else nan,
        defined=defined,
    )


def evaluate_design(
    s: SParameters, n: NoiseParameters | None, v: DesignVector, z0: float
) -> AmplifierMetrics:
    """Metrics of design ``v``. Poles yield ``defined=False`` instead of raising."""
    try:
        gs = source_reflection(v.d1, v.l1)
        gl = load_reflection(v.d2, v.l2)
    except SingularError:
        nan = float("nan")
        cn = complex(nan, nan)
        return AmplifierMetrics(nan, nan, math.inf, math.inf, cn, cn, cn, cn, nan, nan, False)
    return metrics_from_reflections(s, n, gs, gl, z0)
