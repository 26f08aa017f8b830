"""Batched resolution: solve a few paths at a time, delete the chosen arcs, repeat."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .encoding import QubitLayout, build_layout
from .graph import Graph, Path, PathSet, has_st_path, max_flow_min_cut, remove_arcs
from .objectives import ObjectiveSpec
from .optimizers import OptimizerConfig
from .simulator import MAX_QUBITS, AnsatzParams, exact_distribution, run_ansatz, sample, empirical_distribution
from .variational import optimize_ansatz, extract_solution

DEFAULT_CANDIDATE_CAP = 256


class IterativeError(RuntimeError):
    def __init__(self, message: str, partial: "IterativeResult"):
        self.partial = partial
        super().__init__(message)


def shortest_simple_paths(g: Graph, cap: int = DEFAULT_CANDIDATE_CAP) -> list[Path]:
    """Up to ``cap`` simple s-t paths ordered by arc count, then by label sequence."""
    out = {v: g.out_arcs(v) for v in g.vertices}
    found: list[Path] = []

    def dfs(v, depth_left, arcs, verts, on_path):
        if len(found) >= cap:
            return
        for a in out[v]:
            if a.head in on_path:
                continue
            if a.head == g.sink:
                if depth_left == 1:
                    found.append(Path(tuple(arcs + [a.label]), tuple(verts + [a.head])))
                    if len(found) >= cap:
                        return
            elif depth_left > 1:
                on_path.add(a.head)
                dfs(a.head, depth_left - 1, arcs + [a.label], verts + [a.head], on_path)
                on_path.discard(a.head)

    for length in range(1, len(g.vertices)):
        dfs(g.source, length, [], [g.source], {g.source})
        if len(found) >= cap:
            break
    return found


def select_path_batch(g: Graph, k: int, mode: str = "overlap-greedy",
                      candidate_cap: int = DEFAULT_CANDIDATE_CAP) -> PathSet:
    if k < 1:
        raise ValueError("batch size must be >= 1")
    candidates = shortest_simple_paths(g, candidate_cap)
    if not candidates:
        raise ValueError("no s-t path in graph")
    if mode == "shortest-first":
        chosen = candidates[:k]
    elif mode == "overlap-greedy":
        chosen = [candidates[0]]
        covered = set(candidates[0].arc_labels)
        rest = candidates[1:]
        while rest and len(chosen) < k:
            nxt = min(rest, key=lambda p: (-len(covered.intersection(p.arc_labels)), p.arc_labels))
            chosen.append(nxt)
            covered.update(nxt.arc_labels)
            rest.remove(nxt)
    else:
        raise ValueError(f"unknown path selection {mode!r}")
    complete = len(candidates) < candidate_cap and len(chosen) == len(candidates)
    return PathSet(tuple(chosen), complete)


def greedy_warm_start(layout: QubitLayout, g: Graph) -> tuple[int, ...]:
    """Classical one-hot guess: reuse an already-removed arc, else the best coverage per weight."""
    usage = {k: len({layout.locate(q)[0] for q in qs}) for k, qs in layout.arc_positions.items()}
    removed: set[int] = set()
    positions = []
    for p in layout.paths:
        hit = [j for j, k in enumerate(p.arc_labels) if k in removed]
        if hit:
            positions.append(hit[0])
            continue
        j = max(range(p.length), key=lambda j: (usage[p.arc_labels[j]] / g.weight(p.arc_labels[j]), -j))
        positions.append(j)
        removed.add(p.arc_labels[j])
    return tuple(positions)


@dataclass
class IterativeConfig:
    batch_size: int = 3
    path_selection: str = "overlap-greedy"
    candidate_cap: int = DEFAULT_CANDIDATE_CAP
    depth: int = 1
    warm_angle: float = 0.1
    init_gamma: float = 0.1
    init_beta: float = 0.3
    topology: str = "ring"
    sweeps: int = 1
    objective: ObjectiveSpec = field(default_factory=ObjectiveSpec)
    optimizer: OptimizerConfig = field(default_factory=lambda: OptimizerConfig(budget=40))
    extraction: str = "best-sampled"
    extraction_shots: int = 1024
    seed: int = 0
    max_qubits: int = 20

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if not 1 <= self.max_qubits <= MAX_QUBITS:
            raise ValueError(f"max_qubits must lie in 1..{MAX_QUBITS}")


@dataclass
class Round:
    paths: list[tuple[int, ...]]
    qubits: int
    removed: frozenset[int]
    round_cost: Fraction
    objective_value: float
    bitstring: str

    def to_json(self, index: int, residual_arcs: list[int]) -> dict:
        return {"round": index, "paths": [list(p) for p in self.paths], "qubits": self.qubits,
                "PS": sorted(self.removed), "round_cost": float(self.round_cost),
                "objective": self.objective_value, "bitstring": self.bitstring,
                "residual_arcs": residual_arcs}


@dataclass
class IterativeResult:
    rounds: list[Round] = field(default_factory=list)
    total_cut: frozenset[int] = frozenset()
    total_cost: Fraction = Fraction(0)
    oracle_value: Fraction = Fraction(0)

    @property
    def oracle_gap(self) -> Fraction:
        return self.total_cost - self.oracle_value

    def jsonl_records(self, g: Graph):
        removed: set[int] = set()
        for i, r in enumerate(self.rounds, start=1):
            removed |= r.removed
            yield r.to_json(i, [k for k in g.labels if k not in removed])
        yield {"total_cost": float(self.total_cost), "oracle_value": float(self.oracle_value),
               "gap": float(self.oracle_gap), "total_cut": sorted(self.total_cut)}


def _fit_batch(batch: PathSet, max_qubits: int) -> PathSet:
    paths = list(batch.paths)
    while len(paths) > 1 and sum(p.length for p in paths) > max_qubits:
        paths.pop()
    if paths[0].length > max_qubits:
        raise ValueError(f"path of {paths[0].length} arcs exceeds the {max_qubits}-qubit budget")
    return PathSet(tuple(paths), batch.complete and len(paths) == len(batch.paths))


def solve_iterative(g: Graph, config: IterativeConfig) -> IterativeResult:
    """Repeat: pick a path batch, optimise the ansatz on it, remove the extracted arcs.

    Stops when the sink is unreachable. Removed arcs are never restored.
    """
    result = IterativeResult(oracle_value=max_flow_min_cut(g)[0])
    residual = g
    seeds = np.random.SeedSequence(config.seed)
    while has_st_path(residual):
        round_seed = int(seeds.spawn(1)[0].generate_state(1)[0])
        try:
            batch = _fit_batch(select_path_batch(residual, config.batch_size, config.path_selection,
                                                 config.candidate_cap), config.max_qubits)
            layout = build_layout(batch)
            template = AnsatzParams.uniform(layout, greedy_warm_start(layout, residual), config.warm_angle,
                                            depth=config.depth, topology=config.topology,
                                            sweeps=config.sweeps, gamma=config.init_gamma,
                                            beta=config.init_beta)
            spec = replace(config.objective, seed=round_seed)
            opt = replace(config.optimizer, seed=round_seed)
            res = optimize_ansatz(layout, residual, template, spec, opt)
            state = run_ansatz(layout, residual, res.params)
            if config.extraction == "exact-argmax":
                d = exact_distribution(state, layout, residual)
            else:
                counts = sample(state, config.extraction_shots, round_seed)
                d = empirical_distribution(counts, layout, residual, round_seed)
            removed, _, bits = extract_solution(d, layout, residual, config.extraction)
        except Exception as exc:
            raise IterativeError(f"round {len(result.rounds) + 1} failed: {exc}", result) from exc
        result.rounds.append(Round([p.arc_labels for p in batch], layout.total_qubits, removed,
                                   g.total_weight(removed), res.value, bits))
        result.total_cut = result.total_cut | removed
        result.total_cost = g.total_weight(result.total_cut)
        residual = remove_arcs(residual, removed)
    return result
