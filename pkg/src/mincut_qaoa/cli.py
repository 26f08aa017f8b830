"""Command-line entry point: ``mincut-qaoa <command> --instance FILE|g7|g10 ...``.

Exit codes: 0 success, 2 parse/config error, 3 soundness failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import resolve_instance
from .encoding import (EncodingError, brute_force_min, build_layout, decode, pauli_cost_terms,
                       positions_to_bits, bits_to_str)
from .graph import GraphError, enumerate_paths, has_st_path, max_flow_min_cut, min_cut_by_subsets, remove_arcs
from .iterative import IterativeConfig, IterativeError, greedy_warm_start, solve_iterative
from .objectives import CostDistribution, ObjectiveSpec
from .optimizers import OptimizerConfig
from .simulator import (AnsatzParams, SimulationError, exact_distribution, prepare_warm_start,
                        register_bonds, run_ansatz, sample, empirical_distribution)
from .variational import extract_solution, optimize_ansatz

EXIT_OK, EXIT_CONFIG, EXIT_UNSOUND = 0, 2, 3
SUBSET_ORACLE_MAX_ARCS = 20


class ConfigError(ValueError):
    pass


def _num(x) -> float | int:
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    return x


def _dist_rows(d: CostDistribution) -> list[dict]:
    return [{"cost": c, "mass": m, "percent": round(100 * m, 1)} for c, m in d.support]


def _dist_table(d: CostDistribution, title: str = "") -> list[str]:
    lines = [title] if title else []
    lines.append(f"{'cost':>10}  {'prob %':>7}  mass")
    for row in _dist_rows(d):
        lines.append(f"{row['cost']!r:>10}  {row['percent']:>7.1f}  {row['mass']!r}")
    return lines


def _emit(args, report: dict, table_lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(report, sort_keys=True))
    else:
        print("\n".join(table_lines))


def _paths_for(g, limit):
    ps = enumerate_paths(g, limit)
    if not ps.paths:
        raise ConfigError("instance has no s-t path")
    return ps


def cmd_exact(args) -> int:
    g = resolve_instance(args.instance)
    value, cut = max_flow_min_cut(g)
    report = {"value": _num(value), "cut": sorted(cut)}
    _emit(args, report, [f"min-cut value: {_num(value)!r}", f"cut arcs: {sorted(cut)}"])
    return EXIT_OK


def cmd_paths(args) -> int:
    g = resolve_instance(args.instance)
    ps = enumerate_paths(g, args.limit)
    report = {"complete": ps.complete,
              "paths": [{"arcs": list(p.arc_labels), "vertices": list(p.vertices)} for p in ps]}
    lines = [f"{len(ps)} paths (complete={ps.complete})"]
    lines += [f"{i:>3}: arcs {list(p.arc_labels)} via {'-'.join(map(str, p.vertices))}" for i, p in enumerate(ps)]
    _emit(args, report, lines)
    return EXIT_OK


def cmd_inspect(args) -> int:
    g = resolve_instance(args.instance)
    layout = build_layout(_paths_for(g, args.limit))
    terms = pauli_cost_terms(layout, g)
    report = {**layout.to_json(), **terms.to_json()}
    if args.format == "table":
        lines = [f"qubits: {layout.total_qubits}  offsets: {list(layout.offsets)}"]
        lines += [f"arc {k}: qubits {list(v)}" for k, v in layout.arc_positions.items()]
        lines.append(f"offset {float(terms.offset)!r}")
        lines += [f"{t['coeff']!r:>12} Z{t['support']}" for t in terms.to_json()["terms"]]
        print("\n".join(lines))
    else:
        print(json.dumps(report, sort_keys=True))
    return EXIT_OK


def cmd_oracle_bruteforce(args) -> int:
    g = resolve_instance(args.instance)
    ps = _paths_for(g, args.limit)
    layout = build_layout(ps)
    value, bits = brute_force_min(layout, g)
    flow, _ = max_flow_min_cut(g)
    report = {"feasible_configurations": layout.n_feasible(), "complete_paths": ps.complete,
              "min_cost": _num(value), "bitstring": bits, "arcs": sorted(decode(bits, layout)),
              "max_flow": _num(flow)}
    if len(g.arcs) <= SUBSET_ORACLE_MAX_ARCS:
        report["subset_min"] = _num(min_cut_by_subsets(g)[0])
    lines = [f"{k}: {v}" for k, v in report.items()]
    _emit(args, report, lines)
    return EXIT_OK


def _parse_qubits(text: str, layout) -> tuple[int, ...]:
    """Qubit indices, one per register, to per-path positions."""
    qubits = [int(x) for x in text.split(",") if x.strip()]
    positions = [None] * layout.n_paths
    for q in qubits:
        try:
            i, j = layout.locate(q)
        except EncodingError as exc:
            raise ConfigError(str(exc)) from None
        if positions[i] is not None:
            raise ConfigError(f"qubits {layout.qubit(i, positions[i])} and {q} share register {i}")
        positions[i] = j
    if None in positions:
        raise ConfigError(f"need one qubit in each of the {layout.n_paths} registers")
    return tuple(positions)


def _warm_positions(text: str, layout, g) -> tuple[int, ...]:
    if text == "greedy":
        return greedy_warm_start(layout, g)
    if text == "optimum":
        _, bits = brute_force_min(layout, g)
        return _parse_qubits(",".join(str(q) for q, b in enumerate(bits) if b == "1"), layout)
    return _parse_qubits(text, layout)


def _parse_angles(text: str, layout, topology) -> tuple[tuple[float, ...], ...]:
    """A single angle for every bond, or ';'-separated per-path comma lists."""
    if ";" not in text and "," not in text:
        a = float(text)
        return tuple(tuple(a for _ in register_bonds(p.length, topology)) for p in layout.paths)
    groups = text.split(";")
    if len(groups) != layout.n_paths:
        raise ConfigError(f"need {layout.n_paths} angle groups")
    return tuple(tuple(float(x) for x in grp.split(",") if x.strip()) for grp in groups)


def cmd_warmstart(args) -> int:
    g = resolve_instance(args.instance)
    layout = build_layout(_paths_for(g, args.limit))
    positions = _warm_positions(args.positions, layout, g)
    settings = []
    lines = []
    for text in args.angles or ["0"]:
        params = AnsatzParams(positions, _parse_angles(text, layout, args.topology), topology=args.topology)
        try:
            params.check(layout)
        except SimulationError as exc:
            raise ConfigError(str(exc)) from None
        state = prepare_warm_start(layout, params)
        d = exact_distribution(state, layout, g)
        entry = {"angles": text, "exact": _dist_rows(d)}
        lines += _dist_table(d, f"angles {text}: exact distribution")
        if args.shots:
            e = empirical_distribution(sample(state, args.shots, args.seed), layout, g, args.seed)
            entry["empirical"] = {"shots": args.shots, "seed": args.seed, "support": _dist_rows(e)}
            lines += _dist_table(e, f"angles {text}: {args.shots} shots, seed {args.seed}")
        settings.append(entry)
    warm_bits = bits_to_str(positions_to_bits(positions, layout))
    report = {"warm_start": warm_bits, "qubits": layout.total_qubits, "settings": settings}
    _emit(args, report, [f"warm start {warm_bits} ({layout.total_qubits} qubits)"] + lines)
    return EXIT_OK


def _optimizer_config(args) -> OptimizerConfig:
    method = {"powell": "powell", "ga": "genetic"}[args.optimizer]
    return OptimizerConfig(method=method, budget=args.budget, seed=args.seed,
                           population=args.population, parents=args.parents)


def _objective(args) -> ObjectiveSpec:
    try:
        return ObjectiveSpec.parse(args.objective, shots=args.shots, seed=args.seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def cmd_qaoa(args) -> int:
    g = resolve_instance(args.instance)
    layout = build_layout(_paths_for(g, args.limit))
    positions = _warm_positions(args.warm, layout, g)
    template = AnsatzParams.uniform(layout, positions, args.warm_angle, depth=args.depth,
                                    topology=args.topology, sweeps=args.sweeps,
                                    gamma=args.init_gamma, beta=args.init_beta)
    spec = _objective(args)
    res = optimize_ansatz(layout, g, template, spec, _optimizer_config(args),
                          record_snapshots=bool(args.trace), train_warm=not args.fixed_warm,
                          warm_population_spread=args.warm_spread)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            for rec in res.trace.jsonl_records():
                fh.write(json.dumps(rec) + "\n")
    state = run_ansatz(layout, g, res.params)
    exact = exact_distribution(state, layout, g)
    if args.extraction == "exact-argmax":
        final = exact
    else:
        final = empirical_distribution(sample(state, args.shots or 1024, args.seed), layout, g, args.seed)
    arcs, cost_value, bits = extract_solution(final, layout, g, args.extraction)
    oracle, _ = max_flow_min_cut(g)
    report = {
        "trace": {"evaluations": res.trace.n_evaluations, "initial": res.trace.initial_value,
                  "best": res.trace.best_value},
        "objective": {**spec.describe(), "value": res.value},
        "distribution": _dist_rows(exact),
        "best_bitstring": bits, "arcs": sorted(arcs), "cost": _num(cost_value),
        "oracle_value": _num(oracle), "gap": _num(cost_value - oracle),
        "theta": [float(t) for t in (res.params.vector() if not args.fixed_warm else res.params.layer_vector())],
    }
    lines = [f"evaluations {res.trace.n_evaluations}: initial {res.trace.initial_value!r} -> best {res.trace.best_value!r}"]
    lines += _dist_table(exact, "final distribution (exact)")
    lines += [f"best bitstring {bits}", f"arcs {sorted(arcs)}  cost {_num(cost_value)!r}",
              f"oracle {_num(oracle)!r}  gap {_num(cost_value - oracle)!r}"]
    _emit(args, report, lines)
    return EXIT_OK


def cmd_iterative(args) -> int:
    g = resolve_instance(args.instance)
    config = IterativeConfig(batch_size=args.batch, path_selection=args.selection, depth=args.depth,
                             warm_angle=args.warm_angle, topology=args.topology, sweeps=args.sweeps,
                             objective=_objective(args), optimizer=_optimizer_config(args),
                             extraction=args.extraction, extraction_shots=args.shots or 1024,
                             seed=args.seed, max_qubits=args.max_qubits)
    try:
        result = solve_iterative(g, config)
    except IterativeError as exc:
        for rec in exc.partial.jsonl_records(g):
            print(json.dumps(rec, sort_keys=True))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    records = list(result.jsonl_records(g))
    # independent re-check on the untouched input graph
    sound = not has_st_path(remove_arcs(resolve_instance(args.instance), result.total_cut))
    if args.format == "json":
        for rec in records:
            print(json.dumps(rec, sort_keys=True))
    else:
        for rec in records[:-1]:
            print(f"round {rec['round']}: {len(rec['paths'])} paths, {rec['qubits']} qubits, "
                  f"removed {rec['PS']} (cost {rec['round_cost']!r})")
        last = records[-1]
        print(f"total cost {last['total_cost']!r}, oracle {last['oracle_value']!r}, gap {last['gap']!r}")
    if not sound:
        print("soundness check FAILED: cut does not disconnect source from sink", file=sys.stderr)
        return EXIT_UNSOUND
    print(json.dumps({"sound": True}) if args.format == "json" else "soundness check passed")
    return EXIT_OK


COMMANDS = {
    "exact": cmd_exact, "paths": cmd_paths, "inspect": cmd_inspect, "warmstart": cmd_warmstart,
    "qaoa": cmd_qaoa, "iterative": cmd_iterative, "oracle-bruteforce": cmd_oracle_bruteforce,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mincut-qaoa", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--instance", required=True, help="instance file, or bundled name g7 / g10")
        p.add_argument("--format", choices=("table", "json"), default="table")
        p.add_argument("--limit", type=int, default=10**5, help="path enumeration cap")

    def variational(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--shots", type=int, default=None, help="shots per objective call (default: exact)")
        p.add_argument("--depth", type=int, default=1)
        p.add_argument("--objective", default="expectation", help="expectation | cvar:A | f1:L1,L2,L3,RHO")
        p.add_argument("--optimizer", choices=("powell", "ga"), default="powell")
        p.add_argument("--budget", type=int, default=200)
        p.add_argument("--population", type=int, default=32)
        p.add_argument("--parents", type=int, default=8)
        p.add_argument("--warm-angle", type=float, default=0.1)
        p.add_argument("--topology", choices=("ring", "chain"), default="ring")
        p.add_argument("--sweeps", type=int, default=1)
        p.add_argument("--extraction", choices=("best-sampled", "exact-argmax"), default="best-sampled")

    for name in ("exact", "paths", "inspect", "oracle-bruteforce"):
        common(sub.add_parser(name))

    p = sub.add_parser("warmstart", help="warm-start distributions for one or more angle settings")
    common(p)
    p.add_argument("--positions", default="greedy", help="qubits, one per register; or greedy / optimum")
    p.add_argument("--angles", action="append", help="angle for all bonds, or 'a,b;c,d,...' per path")
    p.add_argument("--topology", choices=("ring", "chain"), default="ring")
    p.add_argument("--shots", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("qaoa", help="train one ansatz on all enumerated paths")
    common(p)
    variational(p)
    p.add_argument("--warm", default="greedy", help="qubits, one per register; or greedy / optimum")
    p.add_argument("--init-gamma", type=float, default=0.1)
    p.add_argument("--init-beta", type=float, default=0.3)
    p.add_argument("--fixed-warm", action="store_true", help="train only the layer angles")
    p.add_argument("--warm-spread", type=float, default=None, help="GA: seed population around the start")
    p.add_argument("--trace", default=None, help="write one JSON line per evaluation")

    p = sub.add_parser("iterative", help="batched resolution until source and sink are disconnected")
    common(p)
    variational(p)
    p.set_defaults(budget=40)
    p.add_argument("--batch", type=int, default=3)
    p.add_argument("--selection", choices=("overlap-greedy", "shortest-first"), default="overlap-greedy")
    p.add_argument("--max-qubits", type=int, default=20)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (GraphError, EncodingError, SimulationError, ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
