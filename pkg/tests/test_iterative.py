import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mincut_qaoa.encoding import brute_force_min, feasible_indices, positions_to_bits
from mincut_qaoa.graph import has_st_path, load_graph, max_flow_min_cut, remove_arcs
from mincut_qaoa.iterative import (IterativeConfig, IterativeError, greedy_warm_start, select_path_batch,
                                   shortest_simple_paths, solve_iterative)
from mincut_qaoa.objectives import CostDistribution, ObjectiveSpec
from mincut_qaoa.optimizers import OptimizerConfig
from mincut_qaoa.simulator import exact_distribution, init_basis
from mincut_qaoa.variational import extract_solution

from conftest import random_connected_graph

BRIDGE = "v 4\na 1 1 2 3\na 2 1 2 5\na 3 2 3 1\na 4 3 4 6\na 5 2 4 2\ns 1\nt 3\n"


def fast_config(**kw):
    base = dict(optimizer=OptimizerConfig(budget=15), extraction_shots=256)
    base.update(kw)
    return IterativeConfig(**base)


def test_shortest_simple_paths_order(g7):
    paths = shortest_simple_paths(g7)
    assert [p.arc_labels for p in paths] == [(1, 2), (3, 4, 6), (3, 10, 9), (3, 4, 5, 2), (3, 7, 8, 9)]
    assert len(shortest_simple_paths(g7, cap=2)) == 2


def test_select_batch_basic(g7):
    assert [p.arc_labels for p in select_path_batch(g7, 1)] == [(1, 2)]
    everything = select_path_batch(g7, 50)
    assert len(everything) == 5 and everything.complete
    assert [p.arc_labels for p in select_path_batch(g7, 2, "shortest-first")] == [(1, 2), (3, 4, 6)]
    with pytest.raises(ValueError):
        select_path_batch(remove_arcs(g7, {1, 3}), 2)


def test_select_batch_overlap_g10(g10):
    batch = select_path_batch(g10, 3)
    assert len(batch) == 3
    covered = set(batch[0].arc_labels)
    for p in batch.paths[1:]:
        assert covered.intersection(p.arc_labels)
        covered.update(p.arc_labels)
    # every selected path leaves the source through one of its arcs
    assert all(g10.arc(p.arc_labels[0]).tail == g10.source for p in batch)


def test_greedy_warm_start_reuses_shared_arc(g7, layout7):
    positions = greedy_warm_start(layout7, g7)
    bits = positions_to_bits(positions, layout7)
    assert len(positions) == 5
    from mincut_qaoa.encoding import decode
    arcs = decode(bits, layout7)
    assert 3 in arcs and len(arcs) <= 3


def test_extract_spike(g7, layout7):
    bits = positions_to_bits((0, 0, 0, 0, 0), layout7)
    psi = init_basis(16, np.flatnonzero(bits))
    arcs, c, s = extract_solution(exact_distribution(psi, layout7, g7), layout7, g7, "exact-argmax")
    assert arcs == {1, 3} and c == 5


def test_extract_uniform_matches_brute_force(g7, layout7):
    idx = feasible_indices(layout7)
    psi = np.zeros(1 << 16, dtype=complex)
    psi[idx] = 1 / math.sqrt(len(idx))
    arcs, c, bits = extract_solution(exact_distribution(psi, layout7, g7), layout7, g7, "exact-argmax")
    assert (c, bits) == brute_force_min(layout7, g7)


def test_extract_rejects_infeasible(g7, layout7):
    d = CostDistribution(((0.0, 1.0),), per_bitstring={"0" * 16: 1.0})
    with pytest.raises(ValueError, match="infeasible"):
        extract_solution(d, layout7, g7, "exact-argmax")
    with pytest.raises(ValueError):
        extract_solution(CostDistribution(((0.0, 1.0),)), layout7, g7)


def test_bridge_arc_single_round():
    g = load_graph(BRIDGE)
    result = solve_iterative(g, fast_config(batch_size=5, extraction="exact-argmax"))
    assert len(result.rounds) == 1
    assert result.total_cut == {3}
    assert result.oracle_gap == 0


def test_g7_full_batch_exact_argmax(g7):
    result = solve_iterative(g7, fast_config(batch_size=5, extraction="exact-argmax"))
    assert result.total_cost == max_flow_min_cut(g7)[0] == 5
    assert result.oracle_gap == 0
    assert result.rounds[0].qubits == 16


def test_g10_multi_round(g10):
    result = solve_iterative(g10, fast_config(batch_size=3))
    assert len(result.rounds) >= 2
    assert all(r.qubits == sum(len(p) for p in r.paths) for r in result.rounds)
    assert not has_st_path(remove_arcs(g10, result.total_cut))
    assert result.total_cost >= 8
    records = list(result.jsonl_records(g10))
    assert records[-1]["total_cost"] == float(result.total_cost)
    assert records[0]["residual_arcs"] == [k for k in g10.labels if k not in result.rounds[0].removed]


def test_deterministic(g10):
    cfg = fast_config(batch_size=2, objective=ObjectiveSpec("cvar", alpha=0.5, shots=64))
    a, b = solve_iterative(g10, cfg), solve_iterative(g10, cfg)
    assert [(r.removed, r.bitstring, r.objective_value) for r in a.rounds] == \
        [(r.removed, r.bitstring, r.objective_value) for r in b.rounds]


def test_batch_trimmed_to_qubit_budget(g10):
    result = solve_iterative(g10, fast_config(batch_size=6, max_qubits=9))
    assert all(r.qubits <= 9 for r in result.rounds)


def test_inner_failure_attaches_partial(g10):

    cfg = fast_config(batch_size=2, max_qubits=3)
    with pytest.raises(IterativeError) as info:
        solve_iterative(g10, cfg)
    assert info.value.partial.rounds == []


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_soundness_and_lower_bound_random(seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, max_vertices=7, max_arcs=12)
    cfg = fast_config(batch_size=int(rng.integers(1, 4)), max_qubits=14, seed=seed)
    result = solve_iterative(g, cfg)
    assert not has_st_path(remove_arcs(g, result.total_cut))
    assert result.total_cost >= max_flow_min_cut(g)[0]
    assert len(result.rounds) <= len(g.arcs)
    assert all(r.removed for r in result.rounds)
