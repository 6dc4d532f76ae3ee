"""Published FHX35X reference designs and a harness comparing them to a device file.

The reference numbers are the five trial layouts (lengths in degrees at the
design frequency) with their source reflection and noise figure, and the
measured response of trial 3. The design frequency and the device data they
were computed with were never published, so the comparison against a
fixture is informative only: source reflections depend on the lengths alone
and are checked exactly, everything else depends on the fixture.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np
from scipy.optimize import least_squares

from .amplifier import mag_db, noise_circle
from .design import DesignSpec, evaluate_fixed
from .network import DesignVector, source_reflection
from .touchstone import DeviceData, NoiseParameters, device_at, parse_device_file


@dataclass(frozen=True)
class ReferenceTrial:
    d1_deg: float
    l1_deg: float
    d2_deg: float
    l2_deg: float
    gamma_s_mag: float
    gamma_s_deg: float
    nf_db: float

    @property
    def vector(self) -> DesignVector:
        return DesignVector.from_degrees(self.d1_deg, self.l1_deg, self.d2_deg, self.l2_deg)

    @property
    def gamma_s(self) -> complex:
        return cmath.rect(self.gamma_s_mag, math.radians(self.gamma_s_deg))


REFERENCE_TRIALS = (
    ReferenceTrial(41.1599, 23.8961, 34.3209, 50.9232, 0.748292, 56.06473, 0.847376),
    ReferenceTrial(43.9317, 20.6296, 30.6803, 61.7606, 0.798747, 55.08966, 0.901598),
    ReferenceTrial(45.1513, 21.6466, 16.1073, 61.3262, 0.783121, 51.18767, 0.714466),
    ReferenceTrial(46.9831, 20.7794, 29.0269, 56.6803, 0.796434, 48.84327, 0.656502),
    ReferenceTrial(41.771, 23.9152, 41.7792, 43.972, 0.74804, 54.82775, 0.800902),
)

# trial 3 at the design frequency
REFERENCE_GAIN_DB = 20.01
REFERENCE_S11_DB = -2.50
REFERENCE_S22_DB = -2.73
REFERENCE_NF_CIRCLE_DB = 1.0
REFERENCE_TARGET_GAIN_DB = 20.0

DEFAULT_FIXTURE = "fhx35x_approx.s2p"
DEFAULT_FIXTURE_FREQUENCY = 4e9


def load_fixture(name: str = DEFAULT_FIXTURE) -> DeviceData:
    """Load one of the device files bundled with the package."""
    text = resources.files("lnaswarm.data").joinpath(name).read_text()
    return parse_device_file(text, name=name.rsplit(".", 1)[0])


def implied_noise_parameters(z0: float = 50.0) -> tuple[NoiseParameters, float]:
    """Noise parameters that best explain the reference NF column.

    Fits (Fmin, Gamma_opt, Rn) by least squares to the five published
    (Gamma_s, NF) pairs. Returns the fit and the worst residual in dB.
    """
    gs = np.array([t.gamma_s for t in REFERENCE_TRIALS])
    nf = np.array([10 ** (t.nf_db / 10) for t in REFERENCE_TRIALS])
    ys = (1 - gs) / (1 + gs) / z0

    def model(p):
        fmin, gr, gi, rn = p
        go = complex(gr, gi)
        yo = (1 - go) / (1 + go) / z0
        return fmin + rn / ys.real * np.abs(ys - yo) ** 2

    res = least_squares(lambda p: model(p) - nf, [1.1, 0.5, 0.5, 15.0])
    fmin, gr, gi, rn = res.x
    worst = float(np.max(np.abs(10 * np.log10(model(res.x)) - 10 * np.log10(nf))))
    return NoiseParameters(float(fmin), complex(gr, gi), float(rn)), worst


@dataclass
class TrialComparison:
    trial: int
    gamma_s: complex
    gamma_s_mag_err: float
    gamma_s_deg_err: float
    nf_db: float
    nf_db_ref: float
    inside_circle: bool


@dataclass
class ReferenceComparison:
    device: str
    frequency: float
    trials: list[TrialComparison]
    gain_db: float
    s11_db: float
    s22_db: float
    implied_noise: NoiseParameters
    implied_fit_residual_db: float
    fixture_noise: NoiseParameters

    def format(self) -> str:
        ln = [
            f"device {self.device} at {self.frequency / 1e9:g} GHz",
            "trial  |Gs| err    ang err[deg]  NF[dB] fixture  NF[dB] ref  inside 1dB circle",
        ]
        for t in self.trials:
            ln.append(
                f"{t.trial:5d}  {t.gamma_s_mag_err:+.2e}  {t.gamma_s_deg_err:+11.5f}"
                f"  {t.nf_db:14.6f}  {t.nf_db_ref:10.6f}  {'yes' if t.inside_circle else 'no'}"
            )
        ln.append(
            f"trial 3 response: gain {self.gain_db:.3f} dB (ref {REFERENCE_GAIN_DB}), "
            f"|S11| {self.s11_db:.3f} dB (ref {REFERENCE_S11_DB}), "
            f"|S22| {self.s22_db:.3f} dB (ref {REFERENCE_S22_DB})"
        )
        for label, n in (("fixture", self.fixture_noise), ("implied", self.implied_noise)):
            ln.append(
                f"{label} noise: Fmin {n.f_min_db:.4f} dB, Gopt {abs(n.gamma_opt):.4f}"
                f"@{math.degrees(cmath.phase(n.gamma_opt)):.3f} deg, Rn {n.r_n:.3f} ohm"
            )
        ln.append(f"implied-noise fit worst residual: {self.implied_fit_residual_db:.2e} dB")
        return "\n".join(ln)


def compare_reference(device: DeviceData, frequency: float) -> ReferenceComparison:
    spec = DesignSpec(device, frequency)
    _, noise = device_at(device, frequency, require_noise=True)
    z0 = device.reference_impedance
    circle = noise_circle(noise, REFERENCE_NF_CIRCLE_DB, z0) if noise.f_min_db <= REFERENCE_NF_CIRCLE_DB else None
    rows = []
    for i, t in enumerate(REFERENCE_TRIALS, start=1):
        v = t.vector
        gs = source_reflection(v.d1, v.l1)
        m = evaluate_fixed(spec, v)
        ang_err = (math.degrees(cmath.phase(gs)) - t.gamma_s_deg + 180) % 360 - 180
        rows.append(
            TrialComparison(
                trial=i,
                gamma_s=gs,
                gamma_s_mag_err=abs(gs) - t.gamma_s_mag,
                gamma_s_deg_err=ang_err,
                nf_db=m.noise_figure_db,
                nf_db_ref=t.nf_db,
                inside_circle=bool(circle is not None and circle.contains(gs)),
            )
        )
    m3 = evaluate_fixed(spec, REFERENCE_TRIALS[2].vector)
    implied, resid = implied_noise_parameters(z0)
    return ReferenceComparison(
        device=device.name,
        frequency=frequency,
        trials=rows,
        gain_db=m3.gain_db,
        s11_db=mag_db(m3.amp_s11),
        s22_db=mag_db(m3.amp_s22),
        implied_noise=implied,
        implied_fit_residual_db=resid,
        fixture_noise=noise,
    )
