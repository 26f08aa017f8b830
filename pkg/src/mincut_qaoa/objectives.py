"""Cost distributions and the scalar objectives trained on them."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

# cumulative-mass comparisons tolerate float summation drift
_CDF_EPS = 1e-12

UNBALANCED = (1e8, 1e4, 1.0)
BALANCED = (1.0, 1.0, 1.0)


@dataclass(frozen=True)
class CostDistribution:
    support: tuple[tuple[float, float], ...]
    source: str = "exact"
    shots: int | None = None
    seed: int | None = None
    per_bitstring: Mapping[str, float] | None = field(default=None, compare=False)

    def __post_init__(self):
        costs = [c for c, _ in self.support]
        if costs != sorted(costs):
            raise ValueError("support must be sorted by cost")
        if any(m < 0 for _, m in self.support):
            raise ValueError("negative mass")
        if self.support and abs(sum(m for _, m in self.support) - 1.0) > 1e-9:
            raise ValueError("masses do not sum to 1")

    @classmethod
    def from_masses(cls, masses: Mapping[float, float], **kw) -> "CostDistribution":
        return cls(tuple(sorted((float(c), float(m)) for c, m in masses.items())), **kw)

    @classmethod
    def from_samples(cls, costs: Iterable[float], **kw) -> "CostDistribution":
        counts = Counter(float(c) for c in costs)
        k = sum(counts.values())
        if k == 0:
            raise ValueError("no samples")
        return cls.from_masses({c: n / k for c, n in counts.items()}, **kw)

    @property
    def costs(self) -> np.ndarray:
        return np.array([c for c, _ in self.support])

    @property
    def masses(self) -> np.ndarray:
        return np.array([m for _, m in self.support])

    def to_json(self) -> dict:
        src = self.source if self.shots is None else {"empirical": {"shots": self.shots, "seed": self.seed}}
        return {"support": [[c, m] for c, m in self.support], "source": src}

    def table(self) -> str:
        """Two-column cost / probability-percentage table."""
        lines = [f"{'cost':>10}  {'prob %':>7}  {'mass':>10}"]
        for c, m in self.support:
            lines.append(f"{c:>10.4g}  {100 * m:>7.1f}  {m:>10.6f}")
        return "\n".join(lines)


def expectation(d: CostDistribution) -> float:
    return float(sum(c * m for c, m in d.support))


def cvar(costs: Iterable[float], alpha: float) -> float:
    """Mean of the ceil(alpha * K) smallest of K sampled costs."""
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    ordered = sorted(float(c) for c in costs)
    if not ordered:
        raise ValueError("empty sample set")
    m = math.ceil(alpha * len(ordered))
    return math.fsum(ordered[:m]) / m


def cvar_distribution(d: CostDistribution, alpha: float) -> float:
    """CVaR of a distribution: mean cost over its lowest ``alpha`` probability mass."""
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    remaining = alpha
    acc = 0.0
    for c, m in d.support:
        take = min(m, remaining)
        acc += take * c
        remaining -= take
        if remaining <= _CDF_EPS:
            break
    return acc / (alpha - max(remaining, 0.0))


def quantile(d: CostDistribution, rho: float) -> float:
    """Left-continuous inverse CDF: smallest cost whose cumulative mass reaches ``rho``."""
    if not 0 < rho < 1:
        raise ValueError("rho must lie in (0, 1)")
    cum = 0.0
    for c, m in d.support:
        cum += m
        if cum >= rho - _CDF_EPS:
            return c
    return d.support[-1][0]


def median(d: CostDistribution) -> float:
    return quantile(d, 0.5)


def composite_f1(d: CostDistribution, lambdas=UNBALANCED, rho: float = 0.75) -> float:
    l1, l2, l3 = lambdas
    return l1 * quantile(d, rho) + l2 * median(d) + l3 * expectation(d)


@dataclass(frozen=True)
class ObjectiveSpec:
    """What to minimise and how to estimate it.

    ``shots=None`` evaluates on the exact distribution; otherwise each call
    draws ``shots`` fresh samples (or reuses one seed when ``crn`` is set).
    """
    kind: str = "expectation"  # expectation | cvar | f1
    alpha: float = 1.0
    lambdas: tuple[float, float, float] = UNBALANCED
    rho: float = 0.75
    shots: int | None = None
    seed: int = 0
    crn: bool = False

    def __post_init__(self):
        if self.kind not in ("expectation", "cvar", "f1"):
            raise ValueError(f"unknown objective kind {self.kind!r}")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")
        if any(l < 0 for l in self.lambdas) or not any(self.lambdas):
            raise ValueError("lambda weights must be >= 0 and not all zero")
        if not 0 < self.rho < 1:
            raise ValueError("rho must lie in (0, 1)")
        if self.shots is not None and self.shots < 1:
            raise ValueError("shots must be >= 1")

    @classmethod
    def parse(cls, text: str, **kw) -> "ObjectiveSpec":
        """Parse ``expectation``, ``cvar:ALPHA`` or ``f1:L1,L2,L3,RHO`` (also ``f1:unbalanced``)."""
        name, _, arg = text.partition(":")
        if name == "expectation":
            return cls("expectation", **kw)
        if name == "cvar":
            return cls("cvar", alpha=float(arg or 1.0), **kw)
        if name == "f1":
            if arg in ("", "unbalanced"):
                return cls("f1", lambdas=UNBALANCED, **kw)
            if arg == "balanced":
                return cls("f1", lambdas=BALANCED, **kw)
            vals = [float(x) for x in arg.split(",")]
            if len(vals) not in (3, 4):
                raise ValueError("f1 needs L1,L2,L3[,RHO]")
            rho = vals[3] if len(vals) == 4 else 0.75
            return cls("f1", lambdas=tuple(vals[:3]), rho=rho, **kw)
        raise ValueError(f"unknown objective {text!r}")

    def describe(self) -> dict:
        params = {"expectation": {}, "cvar": {"alpha": self.alpha},
                  "f1": {"lambdas": list(self.lambdas), "rho": self.rho}}[self.kind]
        return {"kind": self.kind, "params": params}

    def on_distribution(self, d: CostDistribution) -> float:
        if self.kind == "expectation":
            return expectation(d)
        if self.kind == "cvar":
            return cvar_distribution(d, self.alpha)
        return composite_f1(d, self.lambdas, self.rho)

    def on_samples(self, costs: list[float]) -> float:
        if self.kind == "cvar":
            return cvar(costs, self.alpha)
        return self.on_distribution(CostDistribution.from_samples(costs))
