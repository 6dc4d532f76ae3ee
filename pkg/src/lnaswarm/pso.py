"""Global-best particle swarm optimizer with feasibility-first ranking.

The loop follows the classic scheme: evaluate the initial population, then
each iteration update velocity (inertia + personal + global attraction),
move, evaluate, refresh personal bests and finally the global best.

Each particle owns an independent random stream spawned from the run seed,
so results do not depend on whether fitness evaluations run serially or on
a thread pool.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import ObjectiveContractError

# iterations of random draws fetched per particle stream at a time
DRAW_BLOCK = 256

# position -> (fitness, feasible); lower fitness is better
Objective = Callable[[np.ndarray], "tuple[float, bool]"]


def _per_dim(value, n: int, name: str, allow_none: bool = False) -> np.ndarray:
    if value is None:
        if not allow_none:
            raise ValueError(f"{name} is required")
        return np.full(n, np.nan)
    if np.ndim(value) == 0:
        return np.full(n, float(value))
    arr = np.array([np.nan if v is None else float(v) for v in value])
    if arr.shape != (n,):
        raise ValueError(f"{name} must be a scalar or have length {n}")
    return arr


@dataclass(frozen=True)
class SwarmConfig:
    """Swarm settings. Scalars given for per-dimension fields are broadcast.

    ``wrap_period`` entries of ``None`` leave that coordinate unwrapped.
    ``per_dimension_random`` draws fresh uniforms for every coordinate;
    with False one pair of draws per particle is shared by all coordinates.
    """

    n_dimensions: int
    n_particles: int = 15
    max_iterations: int = 3000
    inertia_w: float = 0.4
    learning_c: float = 2.0
    init_lower: float | Sequence[float] = 0.0
    init_upper: float | Sequence[float] = 0.1
    wrap_period: float | Sequence[float | None] | None = None
    v_max: float | Sequence[float] = 0.25
    seed: int = 0
    convergence_epsilon: float = 0.0
    early_stop: bool = False
    per_dimension_random: bool = True

    def __post_init__(self):
        if self.n_particles < 1:
            raise ValueError("n_particles must be >= 1")
        if self.n_dimensions < 1:
            raise ValueError("n_dimensions must be >= 1")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")
        if np.any(self.lower > self.upper):
            raise ValueError("init_lower must not exceed init_upper")
        if not np.all(self.vmax > 0):
            raise ValueError("v_max must be positive")
        p = self.period
        if np.any(p[~np.isnan(p)] <= 0):
            raise ValueError("wrap periods must be positive")

    @cached_property
    def lower(self) -> np.ndarray:
        return _per_dim(self.init_lower, self.n_dimensions, "init_lower")

    @cached_property
    def upper(self) -> np.ndarray:
        return _per_dim(self.init_upper, self.n_dimensions, "init_upper")

    @cached_property
    def vmax(self) -> np.ndarray:
        return _per_dim(self.v_max, self.n_dimensions, "v_max")

    @cached_property
    def period(self) -> np.ndarray:
        return _per_dim(self.wrap_period, self.n_dimensions, "wrap_period", allow_none=True)


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    pbest_position: np.ndarray
    pbest_fitness: float
    pbest_feasible: bool


@dataclass
class ConvergenceTrace:
    """One record per evaluated population, starting with the initial one."""

    iteration: list[int] = field(default_factory=list)
    gbest_fitness: list[float] = field(default_factory=list)
    gbest_feasible: list[bool] = field(default_factory=list)
    n_converged: list[int] = field(default_factory=list)
    n_feasible: list[int] = field(default_factory=list)

    def append(self, iteration, gbest_fitness, gbest_feasible, n_converged, n_feasible):
        self.iteration.append(int(iteration))
        self.gbest_fitness.append(float(gbest_fitness))
        self.gbest_feasible.append(bool(gbest_feasible))
        self.n_converged.append(int(n_converged))
        self.n_feasible.append(int(n_feasible))

    def __len__(self) -> int:
        return len(self.iteration)

    def rows(self):
        return zip(self.iteration, self.gbest_fitness, self.n_converged, self.n_feasible)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", "gbest_fitness", "n_converged", "n_feasible"])
        for it, fit, nc, nf in self.rows():
            w.writerow([it, repr(fit), nc, nf])
        return buf.getvalue()


@dataclass
class SwarmState:
    positions: np.ndarray
    velocities: np.ndarray
    pbest_positions: np.ndarray
    pbest_fitness: np.ndarray
    pbest_feasible: np.ndarray
    gbest_position: np.ndarray
    gbest_fitness: float
    gbest_feasible: bool
    iteration: int
    rngs: list[np.random.Generator]
    # fitness/feasibility of the current positions (not the bests)
    fitness: np.ndarray
    feasible: np.ndarray
    # uniforms drawn ahead from each particle's stream, shape (n, block, 2, k)
    _draws: np.ndarray | None = field(default=None, repr=False)
    _draw_pos: int = field(default=0, repr=False)

    def next_uniforms(self, k: int) -> np.ndarray:
        """(n, 2, k) uniforms, one row per particle stream.

        Draws are buffered in blocks; the sequence per stream is the same as
        drawing (2, k) each iteration.
        """
        d = self._draws
        if d is None or self._draw_pos == d.shape[1] or d.shape[3] != k:
            d = np.stack([rng.random((DRAW_BLOCK, 2, k)) for rng in self.rngs])
            self._draws, self._draw_pos = d, 0
        r = d[:, self._draw_pos]
        self._draw_pos += 1
        return r

    @property
    def particles(self) -> list[Particle]:
        return [self.particle(i) for i in range(len(self.rngs))]

    def particle(self, i: int) -> Particle:
        return Particle(
            self.positions[i].copy(),
            self.velocities[i].copy(),
            self.pbest_positions[i].copy(),
            float(self.pbest_fitness[i]),
            bool(self.pbest_feasible[i]),
        )


@dataclass
class SwarmResult:
    best_position: np.ndarray
    best_fitness: float
    best_feasible: bool
    trace: ConvergenceTrace
    state: SwarmState

    def __iter__(self):
        # allows ``pos, fit, trace = run(...)``
        return iter((self.best_position, self.best_fitness, self.trace))


# ---------------------------------------------------------------------------
# update rules


def velocity_update(p: Particle, gbest, config: SwarmConfig, r1, r2) -> np.ndarray:
    """New velocity of one particle, clamped to ``[-v_max, v_max]``."""
    return _velocity(
        np.asarray(p.velocity, float),
        np.asarray(p.position, float),
        np.asarray(p.pbest_position, float),
        np.asarray(gbest, float),
        config.inertia_w,
        config.learning_c,
        np.asarray(r1, float),
        np.asarray(r2, float),
        config.vmax,
    )


def _velocity(v, x, pbest, gbest, w, c, r1, r2, vmax):
    v_new = w * v + c * r1 * (pbest - x) + c * r2 * (gbest - x)
    return np.minimum(np.maximum(v_new, -vmax), vmax)


def position_update(position, velocity, wrap_period=None) -> np.ndarray:
    """``x + v``; coordinates with a finite period are wrapped into ``[0, period)``."""
    x = np.asarray(position, float) + np.asarray(velocity, float)
    if wrap_period is None:
        return x
    period = np.asarray([np.nan if p is None else p for p in np.atleast_1d(wrap_period)], float)
    return _wrap(x, np.broadcast_to(period, x.shape[-1:]))


def _wrap(x, period):
    # period is per coordinate (last axis); NaN leaves a coordinate unwrapped
    cols = np.flatnonzero(~np.isnan(period))
    if cols.size == 0:
        return x
    p = period[cols]
    wrapped = np.mod(x[..., cols], p)
    # np.mod(-tiny, p) can round to p itself
    wrapped[wrapped >= p] = 0.0
    x = x.copy()
    x[..., cols] = wrapped
    return x


def better(fit_a, feas_a, fit_b, feas_b):
    """True where (fit_a, feas_a) strictly outranks (fit_b, feas_b)."""
    feas_a = np.asarray(feas_a, bool)
    feas_b = np.asarray(feas_b, bool)
    return (feas_a & ~feas_b) | ((feas_a == feas_b) & (np.asarray(fit_a) < np.asarray(fit_b)))


def _best_index(fitness, feasible) -> int:
    # feasible points first; argmin keeps the first index on ties
    fitness = np.asarray(fitness, float)
    feasible = np.asarray(feasible, bool)
    if feasible.any() and not feasible.all():
        idx = np.flatnonzero(feasible)
        return int(idx[np.argmin(fitness[idx])])
    return int(np.argmin(fitness))


# ---------------------------------------------------------------------------
# evaluation


class _Evaluator:
    def __init__(self, objective, vectorized: bool, workers: int | None):
        self.objective = objective
        self.vectorized = vectorized
        self.workers = workers if workers and workers > 1 else None
        self._pool = ThreadPoolExecutor(self.workers) if self.workers else None

    def close(self):
        if self._pool is not None:
            self._pool.shutdown()

    def __call__(self, positions: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if self.vectorized:
            if self._pool is None:
                fit, feas = self.objective(positions)
            else:
                chunks = np.array_split(positions, self.workers)
                parts = list(self._pool.map(self.objective, chunks))
                fit = np.concatenate([p[0] for p in parts])
                feas = np.concatenate([p[1] for p in parts])
        else:
            mapper = map if self._pool is None else self._pool.map
            results = list(mapper(self.objective, positions))
            fit = np.array([r[0] for r in results], dtype=float)
            feas = np.array([bool(r[1]) for r in results], dtype=bool)
        fit = np.asarray(fit, dtype=float).copy()
        feas = np.asarray(feas, dtype=bool)
        bad = ~np.isfinite(fit)
        if np.any(bad & feas):
            i = int(np.flatnonzero(bad & feas)[0])
            raise ObjectiveContractError(
                f"objective returned non-finite fitness {fit[i]} for a feasible point"
            )
        fit[np.isnan(fit)] = np.inf
        return fit, feas


def _spawn_rngs(seed: int, n: int) -> list[np.random.Generator]:
    ss = np.random.SeedSequence(int(seed) & ((1 << 64) - 1))
    return [np.random.Generator(np.random.Philox(child)) for child in ss.spawn(n)]


def _n_converged(fit, feas, eps) -> int:
    return int(np.count_nonzero(feas & (fit <= eps)))


def init_swarm(config: SwarmConfig, objective: Objective, *, vectorized=False, workers=None) -> SwarmState:
    ev = _Evaluator(objective, vectorized, workers)
    try:
        return _init(config, ev)
    finally:
        ev.close()


def _init(config: SwarmConfig, ev: _Evaluator) -> SwarmState:
    n, dim = config.n_particles, config.n_dimensions
    lo, hi = config.lower, config.upper
    rngs = _spawn_rngs(config.seed, n)
    x = np.empty((n, dim))
    for i, rng in enumerate(rngs):
        x[i] = lo + (hi - lo) * rng.random(dim)
    fit, feas = ev(x)
    g = _best_index(fit, feas)
    return SwarmState(
        positions=x,
        velocities=np.zeros((n, dim)),
        pbest_positions=x.copy(),
        pbest_fitness=fit.copy(),
        pbest_feasible=feas.copy(),
        gbest_position=x[g].copy(),
        gbest_fitness=float(fit[g]),
        gbest_feasible=bool(feas[g]),
        iteration=0,
        rngs=rngs,
        fitness=fit,
        feasible=feas,
    )


def step(state: SwarmState, objective: Objective, config: SwarmConfig, *, vectorized=False, workers=None) -> SwarmState:
    """Advance the swarm by one iteration (mutates and returns ``state``)."""
    ev = _Evaluator(objective, vectorized, workers)
    try:
        return _step(state, config, ev)
    finally:
        ev.close()


def _step(state: SwarmState, config: SwarmConfig, ev: _Evaluator) -> SwarmState:
    n, dim = state.positions.shape
    k = dim if config.per_dimension_random else 1
    r = state.next_uniforms(k)
    v = _velocity(
        state.velocities,
        state.positions,
        state.pbest_positions,
        state.gbest_position,
        config.inertia_w,
        config.learning_c,
        r[:, 0, :],
        r[:, 1, :],
        config.vmax,
    )
    x = _wrap(state.positions + v, config.period)
    fit, feas = ev(x)

    improved = better(fit, feas, state.pbest_fitness, state.pbest_feasible)
    state.pbest_positions[improved] = x[improved]
    state.pbest_fitness[improved] = fit[improved]
    state.pbest_feasible[improved] = feas[improved]

    g = _best_index(state.pbest_fitness, state.pbest_feasible)
    if better(state.pbest_fitness[g], state.pbest_feasible[g], state.gbest_fitness, state.gbest_feasible):
        state.gbest_position = state.pbest_positions[g].copy()
        state.gbest_fitness = float(state.pbest_fitness[g])
        state.gbest_feasible = bool(state.pbest_feasible[g])

    state.positions = x
    state.velocities = v
    state.fitness = fit
    state.feasible = feas
    state.iteration += 1
    return state


def run(
    config: SwarmConfig,
    objective: Objective,
    *,
    vectorized: bool = False,
    workers: int | None = None,
    callback: Callable[[SwarmState], None] | None = None,
) -> SwarmResult:
    """Initialize and iterate the swarm ``config.max_iterations`` times.

    ``vectorized=True`` means ``objective`` takes an (N, D) array and returns
    (fitness[N], feasible[N]). ``workers > 1`` evaluates on a thread pool;
    results are identical to serial evaluation. With ``config.early_stop``
    the loop ends once every particle is converged.
    """
    ev = _Evaluator(objective, vectorized, workers)
    eps = config.convergence_epsilon
    trace = ConvergenceTrace()
    try:
        state = _init(config, ev)
        trace.append(0, state.gbest_fitness, state.gbest_feasible,
                     _n_converged(state.fitness, state.feasible, eps),
                     int(state.feasible.sum()))
        for _ in range(config.max_iterations):
            if config.early_stop and trace.n_converged[-1] == config.n_particles:
                break
            _step(state, config, ev)
            trace.append(state.iteration, state.gbest_fitness, state.gbest_feasible,
                         _n_converged(state.fitness, state.feasible, eps),
                         int(state.feasible.sum()))
            if callback is not None:
                callback(state)
    finally:
        ev.close()
    return SwarmResult(
        best_position=state.gbest_position.copy(),
        best_fitness=state.gbest_fitness,
        best_feasible=state.gbest_feasible,
        trace=trace,
        state=state,
    )
