"""Training loop: ansatz parameters -> cost distribution -> scalar objective."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .encoding import QubitLayout, cost_diagonal, decode, is_feasible
from .graph import Graph
from .objectives import CostDistribution, ObjectiveSpec
from .optimizers import OptimizerConfig, OptimizationTrace, ga_minimize, powell_minimize, seeded_population
from .simulator import AnsatzParams, exact_distribution, run_ansatz, sample, sampled_costs, empirical_distribution


class AnsatzObjective:
    """Callable theta -> objective value for a fixed layout, graph and template.

    Shot-based specs derive each call's seed from (spec.seed, call counter)
    unless ``crn`` is set, in which case every call reuses ``spec.seed``.
    """

    def __init__(self, layout: QubitLayout, g: Graph, template: AnsatzParams, spec: ObjectiveSpec,
                 train_warm: bool = True):
        template.check(layout)
        self.train_warm = train_warm
        self.layout = layout
        self.g = g
        self.template = template
        self.spec = spec
        self.costs = cost_diagonal(layout, g)
        self.calls = 0
        self.last_distribution: CostDistribution | None = None

    def params(self, theta) -> AnsatzParams:
        if self.train_warm:
            return self.template.with_vector(theta)
        return self.template.with_layer_vector(theta)

    def initial_vector(self) -> np.ndarray:
        return self.template.vector() if self.train_warm else self.template.layer_vector()

    def state(self, theta) -> np.ndarray:
        return run_ansatz(self.layout, self.g, self.params(theta), self.costs)

    def call_seed(self, call: int) -> int:
        if self.spec.crn:
            return self.spec.seed
        return int(np.random.SeedSequence([self.spec.seed, call]).generate_state(1, np.uint64)[0])

    def distribution(self, theta, seed: int | None = None) -> CostDistribution:
        state = self.state(theta)
        if self.spec.shots is None:
            return exact_distribution(state, self.layout, self.g, self.costs)
        seed = self.call_seed(self.calls) if seed is None else seed
        return empirical_distribution(sample(state, self.spec.shots, seed), self.layout, self.g, seed)

    def __call__(self, theta) -> float:
        state = self.state(theta)
        if self.spec.shots is None:
            d = exact_distribution(state, self.layout, self.g, self.costs)
            value = self.spec.on_distribution(d)
        else:
            seed = self.call_seed(self.calls)
            counts = sample(state, self.spec.shots, seed)
            d = empirical_distribution(counts, self.layout, self.g, seed)
            value = self.spec.on_samples(sampled_costs(counts, self.layout, self.g))
        self.calls += 1
        self.last_distribution = d
        return value

    def summary(self) -> dict | None:
        d = self.last_distribution
        if d is None:
            return None
        top = sorted(d.support, key=lambda cm: -cm[1])[:5]
        return {"min_cost": d.support[0][0], "top": [[c, round(m, 6)] for c, m in top]}


@dataclass
class VariationalResult:
    params: AnsatzParams
    value: float
    trace: OptimizationTrace
    distribution: CostDistribution


def optimize_ansatz(layout: QubitLayout, g: Graph, template: AnsatzParams,
                    spec: ObjectiveSpec, config: OptimizerConfig,
                    record_snapshots: bool = False,
                    warm_population_spread: float | None = None,
                    train_warm: bool = True) -> VariationalResult:
    """Optimise the ansatz angles starting from ``template``.

    With ``train_warm=False`` the warm-start angles stay fixed and only the
    (gamma, beta) layer angles are searched.

    For the GA, ``warm_population_spread`` seeds the first generation with
    small perturbations of the template angles instead of uniform draws.
    """
    f = AnsatzObjective(layout, g, template, spec, train_warm)
    theta0 = f.initial_vector()
    snapshot = f.summary if record_snapshots else None
    if theta0.size == 0:
        trace = OptimizationTrace()
        value = f(theta0)
        trace.evaluations.append(((), value))
        trace.best_theta, trace.best_value = theta0, value
    elif config.method == "powell":
        trace = powell_minimize(f, theta0, config, snapshot=snapshot)
    else:
        init = None
        if warm_population_spread is not None:
            rng = np.random.Generator(np.random.PCG64(config.seed + 1))
            init = seeded_population(theta0, warm_population_spread, config.population, rng,
                                     config.bounds_for(theta0.size))
        trace = ga_minimize(f, theta0.size, config, initial_population=init, snapshot=snapshot)
    best = f.params(trace.best_theta)
    # final distribution of the best parameters, with a fixed seed for shot mode
    dist = f.distribution(trace.best_theta, seed=f.call_seed(10**9) if spec.shots else None)
    return VariationalResult(best, trace.best_value, trace, dist)


def extract_solution(d: CostDistribution, layout: QubitLayout, g: Graph,
                     mode: str = "best-sampled") -> tuple[frozenset[int], Fraction, str]:
    """Cheapest bitstring in the distribution's support, decoded to an arc set.

    Both modes scan the retained per-bitstring support; they differ in where
    that support came from (measured shots vs the exact state). Ties go to
    the lexicographically smallest bitstring.
    """
    if mode not in ("best-sampled", "exact-argmax"):
        raise ValueError(f"unknown extraction mode {mode!r}")
    if mode == "exact-argmax" and d.source != "exact":
        raise ValueError("exact-argmax needs an exact distribution")
    if not d.per_bitstring:
        raise ValueError("distribution has no per-bitstring support")
    best = None
    for bits in sorted(d.per_bitstring):
        if not is_feasible(bits, layout):
            raise ValueError(f"infeasible bitstring {bits} in support")
        arcs = decode(bits, layout)
        c = g.total_weight(arcs)
        if best is None or c < best[1]:
            best = (arcs, c, bits)
    return best

