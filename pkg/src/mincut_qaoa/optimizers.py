"""Derivative-free outer loops: coordinate-wise Powell-style search and a plain GA."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

Objective = Callable[[np.ndarray], float]

_GOLDEN = (math.sqrt(5) - 1) / 2


class ObjectiveError(RuntimeError):
    """An objective evaluation raised; ``theta`` is the offending point."""

    def __init__(self, theta, cause):
        self.theta = np.asarray(theta).tolist()
        super().__init__(f"objective failed at theta={self.theta}: {cause!r}")


class _BudgetExhausted(Exception):
    pass


@dataclass
class OptimizerConfig:
    method: str = "powell"  # powell | genetic
    bounds: Sequence[tuple[float, float]] | None = None  # None: [-pi, pi] everywhere
    budget: int = 200
    seed: int = 0
    # powell
    tol: float = 1e-3
    max_sweeps: int = 10
    initial_step: float = 0.25
    # genetic
    population: int = 32
    parents: int = 8
    mutation_prob: float = 0.1
    mutation_scale: float = 0.2

    def __post_init__(self):
        if self.method not in ("powell", "genetic"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if self.method == "genetic" and self.population < 2:
            raise ValueError("population must be >= 2")
        if not 1 <= self.parents <= self.population:
            raise ValueError("parents must lie in 1..population")

    def bounds_for(self, dim: int) -> np.ndarray:
        if self.bounds is None:
            return np.tile([-math.pi, math.pi], (dim, 1))
        b = np.asarray(self.bounds, dtype=float)
        if b.shape != (dim, 2) or np.any(b[:, 0] > b[:, 1]):
            raise ValueError(f"bounds must be {dim} nonempty intervals")
        return b


@dataclass
class OptimizationTrace:
    evaluations: list[tuple[tuple[float, ...], float]] = field(default_factory=list)
    best_theta: np.ndarray | None = None
    best_value: float = math.inf
    snapshots: list[dict] = field(default_factory=list)

    @property
    def n_evaluations(self) -> int:
        return len(self.evaluations)

    @property
    def initial_value(self) -> float:
        return self.evaluations[0][1]

    def jsonl_records(self):
        for i, (theta, value) in enumerate(self.evaluations):
            rec = {"iter": i, "theta": list(theta), "value": value}
            if i < len(self.snapshots) and self.snapshots[i]:
                rec["dist_summary"] = self.snapshots[i]
            yield rec


class _Evaluator:
    """Budget-limited, bounds-clipping, recording wrapper around an objective."""

    def __init__(self, objective: Objective, bounds: np.ndarray, budget: int,
                 snapshot: Callable[[], dict | None] | None = None):
        self.objective = objective
        self.bounds = bounds
        self.budget = budget
        self.snapshot = snapshot
        self.trace = OptimizationTrace()

    def __call__(self, theta) -> float:
        if self.trace.n_evaluations >= self.budget:
            raise _BudgetExhausted
        theta = np.clip(np.asarray(theta, dtype=float), self.bounds[:, 0], self.bounds[:, 1])
        try:
            value = float(self.objective(theta))
        except Exception as exc:
            raise ObjectiveError(theta, exc) from exc
        self.trace.evaluations.append((tuple(theta.tolist()), value))
        if self.snapshot is not None:
            self.trace.snapshots.append(self.snapshot())
        if value < self.trace.best_value:
            self.trace.best_value = value
            self.trace.best_theta = theta.copy()
        return value


def _line_search(f, x: np.ndarray, fx: float, i: int, lo: float, hi: float,
                 step: float, tol: float) -> tuple[np.ndarray, float]:
    """Bracket a minimum along coordinate ``i`` from ``x`` and refine by golden section."""

    def at(t):
        y = x.copy()
        y[i] = t
        return y

    cache = {x[i]: fx}

    def fv(t):
        t = min(max(t, lo), hi)
        if t not in cache:
            cache[t] = f(at(t))
        return cache[t]

    a = x[i]
    b = min(a + step, hi)
    if fv(b) > fx:
        b = max(a - step, lo)
        if fv(b) > fx:
            left, right = max(a - step, lo), min(a + step, hi)
            b = None
    if b is not None:
        # expand downhill until the function rises or a bound is hit
        direction = 1.0 if b > a else -1.0
        prev, cur = a, b
        while True:
            nxt = cur + direction * (abs(cur - prev) / _GOLDEN)
            nxt = min(max(nxt, lo), hi)
            if nxt == cur or fv(nxt) > fv(cur):
                left, right = sorted((prev, nxt if nxt != cur else cur))
                break
            prev, cur = cur, nxt
    c = right - _GOLDEN * (right - left)
    d = left + _GOLDEN * (right - left)
    while right - left > tol:
        if fv(c) < fv(d):
            right, d = d, c
            c = right - _GOLDEN * (right - left)
        else:
            left, c = c, d
            d = left + _GOLDEN * (right - left)
    t_best = min(cache, key=lambda t: (cache[t], abs(t - a)))
    return at(t_best), cache[t_best]


def powell_minimize(objective: Objective, theta0, config: OptimizerConfig,
                    snapshot=None) -> OptimizationTrace:
    """Sweeps of bounded one-dimensional minimisations along the coordinate axes.

    Steps are accepted only when they lower the objective, so the current
    value never increases. Stops on budget exhaustion, after ``max_sweeps``,
    or when a full sweep improves by less than ``tol``.
    """
    x = np.asarray(theta0, dtype=float).copy()
    bounds = config.bounds_for(x.size)
    if np.any(x < bounds[:, 0]) or np.any(x > bounds[:, 1]):
        raise ValueError("theta0 outside bounds")
    ev = _Evaluator(objective, bounds, config.budget, snapshot)
    try:
        fx = ev(x)
        for _ in range(config.max_sweeps):
            start = fx
            for i in range(x.size):
                x, fx = _line_search(ev, x, fx, i, bounds[i, 0], bounds[i, 1],
                                     config.initial_step, config.tol)
            if start - fx < config.tol:
                break
    except _BudgetExhausted:
        pass
    return ev.trace


def seeded_population(center, spread: float, size: int, rng: np.random.Generator,
                      bounds: np.ndarray | None = None) -> np.ndarray:
    """Individuals scattered uniformly within ``spread`` of ``center``; row 0 is the center."""
    center = np.asarray(center, dtype=float)
    pop = center + rng.uniform(-spread, spread, size=(size, center.size))
    pop[0] = center
    if bounds is not None:
        pop = np.clip(pop, bounds[:, 0], bounds[:, 1])
    return pop


def ga_minimize(objective: Objective, dim: int, config: OptimizerConfig,
                initial_population=None, snapshot=None) -> OptimizationTrace:
    """Generational GA: truncation selection, single-point crossover, uniform mutation.

    The ``parents`` best individuals pass unchanged into the next generation,
    so the best value never worsens.
    """
    rng = np.random.Generator(np.random.PCG64(config.seed))
    bounds = config.bounds_for(dim)
    lo, hi = bounds[:, 0], bounds[:, 1]
    if initial_population is None:
        pop = rng.uniform(lo, hi, size=(config.population, dim))
    else:
        pop = np.clip(np.asarray(initial_population, dtype=float), lo, hi)
        if pop.shape != (config.population, dim):
            raise ValueError(f"initial population must have shape {(config.population, dim)}")
    ev = _Evaluator(objective, bounds, config.budget, snapshot)
    fitness = np.full(len(pop), np.inf)
    try:
        for j in range(len(pop)):
            fitness[j] = ev(pop[j])
        while True:
            order = np.argsort(fitness, kind="stable")
            parents, parent_fit = pop[order[:config.parents]], fitness[order[:config.parents]]
            n_children = config.population - config.parents
            children = np.empty((n_children, dim))
            for c in range(n_children):
                p1, p2 = rng.integers(0, config.parents, size=2)
                cut = rng.integers(1, dim) if dim > 1 else 0
                child = np.concatenate([parents[p1, :cut], parents[p2, cut:]])
                mutate = rng.random(dim) < config.mutation_prob
                child = child + mutate * rng.uniform(-config.mutation_scale, config.mutation_scale, dim)
                children[c] = np.clip(child, lo, hi)
            pop = np.vstack([parents, children])
            fitness = np.concatenate([parent_fit, np.full(n_children, np.inf)])
            for j in range(config.parents, config.population):
                fitness[j] = ev(pop[j])
    except _BudgetExhausted:
        pass
    return ev.trace
