"""Low-noise amplifier design as a constrained swarm search.

A particle is the four matching lengths ``(d1, l1, d2, l2)`` in wavelengths.
Fitness is the distance of the transducer gain from its target in dB.
Noise figure and port reflections are hard constraints, handled with the
feasibility-first ordering of :mod:`lnaswarm.pso`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import pso
from .amplifier import AmplifierMetrics, evaluate_design
from .kernels import BatchMetrics, evaluate_batch
from .network import HALF_WAVE, DesignVector
from .touchstone import DeviceData, device_at


@dataclass(frozen=True)
class DesignTargets:
    gain_target_db: float = 20.0
    nf_max_db: float = 1.0
    reflection_max: float = 0.99
    gain_tolerance_db: float = 0.05

    def __post_init__(self):
        if not 0 < self.reflection_max <= 1:
            raise ValueError("reflection_max must be in (0, 1]")
        if self.nf_max_db < 0:
            raise ValueError("nf_max_db must be >= 0")
        if not self.gain_tolerance_db > 0:
            raise ValueError("gain_tolerance_db must be > 0")


def default_swarm(seed: int = 0, **overrides) -> pso.SwarmConfig:
    """Swarm settings for the four-length problem.

    15 particles, 3000 iterations, w = 0.4, c = 2, initial lengths drawn in
    [0, 0.1] wavelengths, positions wrapped every half wavelength and speed
    capped at a quarter wavelength per iteration.
    """
    kw = dict(
        n_dimensions=4,
        n_particles=15,
        max_iterations=3000,
        inertia_w=0.4,
        learning_c=2.0,
        init_lower=0.0,
        init_upper=0.1,
        wrap_period=HALF_WAVE,
        v_max=HALF_WAVE / 2,
        seed=seed,
    )
    kw.update(overrides)
    return pso.SwarmConfig(**kw)


@dataclass(frozen=True)
class DesignSpec:
    device: DeviceData
    design_frequency: float
    targets: DesignTargets = field(default_factory=DesignTargets)
    swarm: pso.SwarmConfig = field(default_factory=default_swarm)

    def __post_init__(self):
        lo, hi = self.device.f_range
        if not lo <= self.design_frequency <= hi:
            raise ValueError(
                f"design frequency {self.design_frequency:g} Hz outside device range [{lo:g}, {hi:g}]"
            )


@dataclass
class DesignResult:
    best: DesignVector
    metrics: AmplifierMetrics
    fitness: float
    feasible: bool
    trace: pso.ConvergenceTrace
    seed: int


# ---------------------------------------------------------------------------
# fitness


def fitness(metrics: AmplifierMetrics, targets: DesignTargets) -> tuple[float, bool]:
    """(|gain - target| in dB, feasible). Infeasible points add their violations."""
    if not metrics.defined or not math.isfinite(metrics.gain_db):
        return math.inf, False
    fit, feas = fitness_arrays(
        np.array([metrics.gain_db]),
        np.array([metrics.noise_figure_db]),
        np.array([abs(metrics.gamma_in)]),
        np.array([abs(metrics.gamma_out)]),
        np.array([abs(metrics.gamma_s)]),
        np.array([abs(metrics.gamma_l)]),
        np.array([True]),
        targets,
    )
    return float(fit[0]), bool(feas[0])


def fitness_arrays(gain_db, nf_db, mag_in, mag_out, mag_s, mag_l, defined, t: DesignTargets):
    rmax = t.reflection_max
    with np.errstate(invalid="ignore"):
        feasible = (
            defined
            & (nf_db <= t.nf_max_db)
            & (mag_in < rmax)
            & (mag_out < rmax)
            & (mag_s < 1)
            & (mag_l < 1)
        )
        violation = (
            np.maximum(nf_db - t.nf_max_db, 0.0)
            + np.maximum(mag_in - rmax, 0.0)
            + np.maximum(mag_out - rmax, 0.0)
            + np.maximum(mag_s - 1.0, 0.0)
            + np.maximum(mag_l - 1.0, 0.0)
        )
        fit = np.abs(gain_db - t.gain_target_db)
        fit = np.where(feasible, fit, fit + violation)
    fit = np.where(defined & np.isfinite(fit), fit, np.inf)
    return fit, feasible


def fitness_batch(m: BatchMetrics, t: DesignTargets):
    return fitness_arrays(
        m.gain_db, m.nf_db, np.abs(m.gamma_in), np.abs(m.gamma_out),
        np.abs(m.gamma_s), np.abs(m.gamma_l), m.defined, t,
    )


def is_converged(fitness_value: float, feasible: bool, targets: DesignTargets) -> bool:
    return bool(feasible) and fitness_value <= targets.gain_tolerance_db


# ---------------------------------------------------------------------------
# runs


class DesignObjective:
    """Vectorized objective for the swarm: (N, 4) lengths -> (fitness, feasible)."""

    def __init__(self, spec: DesignSpec, backend: str | None = None):
        self.s, self.noise = device_at(spec.device, spec.design_frequency, require_noise=True)
        self.z0 = spec.device.reference_impedance
        self.targets = spec.targets
        self.backend = backend

    def metrics(self, x) -> BatchMetrics:
        x = np.mod(np.asarray(x, dtype=float), HALF_WAVE)
        return evaluate_batch(x, self.s, self.noise, self.z0, self.backend)

    def __call__(self, x):
        return fitness_batch(self.metrics(x), self.targets)


def design_amplifier(
    spec: DesignSpec, *, workers: int | None = None, backend: str | None = None
) -> DesignResult:
    swarm = spec.swarm
    if swarm.n_dimensions != 4:
        raise ValueError("the design problem has exactly 4 dimensions")
    swarm = replace(swarm, convergence_epsilon=spec.targets.gain_tolerance_db)
    objective = DesignObjective(spec, backend)  # fails fast on range/noise problems
    res = pso.run(swarm, objective, vectorized=True, workers=workers)
    best = DesignVector.from_array(res.best_position)
    metrics = evaluate_fixed(spec, best)
    fit, feas = fitness(metrics, spec.targets)
    return DesignResult(best, metrics, fit, feas, res.trace, swarm.seed)


def evaluate_fixed(spec: DesignSpec, v: DesignVector) -> AmplifierMetrics:
    s, noise = device_at(spec.device, spec.design_frequency, require_noise=True)
    return evaluate_design(s, noise, v, spec.device.reference_impedance)


def sweep(spec: DesignSpec, v: DesignVector, frequencies) -> list[tuple[float, AmplifierMetrics]]:
    """Evaluate a fixed physical layout across frequency.

    Electrical lengths scale with ``f / design_frequency``. Where the device
    has no noise data the noise figure is NaN.
    """
    out = []
    for f in frequencies:
        f = float(f)
        s, noise = device_at(spec.device, f, require_noise=False)
        vf = v if f == spec.design_frequency else v.scaled(f / spec.design_frequency)
        out.append((f, evaluate_design(s, noise, vf, spec.device.reference_impedance)))
    return out

