"""Train the ansatz on one instance for each (optimizer, f1 preset) pair and compare the results.

Example: python3 scripts/train_objectives.py --instance g7 --budget 120 --depth 1
"""
import argparse
import json

from mincut_qaoa import resolve_instance
from mincut_qaoa.encoding import brute_force_min, build_layout
from mincut_qaoa.graph import enumerate_paths
from mincut_qaoa.iterative import greedy_warm_start
from mincut_qaoa.objectives import BALANCED, UNBALANCED, ObjectiveSpec, expectation, median, quantile
from mincut_qaoa.optimizers import OptimizerConfig
from mincut_qaoa.simulator import AnsatzParams
from mincut_qaoa.variational import extract_solution, optimize_ansatz

PRESETS = {"unbalanced": UNBALANCED, "balanced": BALANCED}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instance", default="g7")
    ap.add_argument("--budget", type=int, default=120)
    ap.add_argument("--depth", type=int, default=1)
    ap.add_argument("--warm-angle", type=float, default=0.1)
    ap.add_argument("--shots", type=int, default=None, help="shot-based objective; exact if omitted")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    g = resolve_instance(args.instance)
    layout = build_layout(enumerate_paths(g))
    optimum, _ = brute_force_min(layout, g)
    template = AnsatzParams.uniform(layout, greedy_warm_start(layout, g), args.warm_angle,
                                    depth=args.depth, gamma=0.1, beta=0.3)
    results = []
    for method in ("powell", "genetic"):
        for name, lambdas in PRESETS.items():
            spec = ObjectiveSpec(kind="f1", lambdas=lambdas, shots=args.shots, seed=args.seed)
            config = OptimizerConfig(method=method, budget=args.budget, seed=args.seed,
                                     population=16, parents=4)
            res = optimize_ansatz(layout, g, template, spec, config)
            d = res.distribution
            _, best_cost, bits = extract_solution(d, layout, g)
            results.append({
                "optimizer": method, "preset": name, "initial": res.trace.initial_value,
                "best": res.value, "evaluations": res.trace.n_evaluations,
                "q75": quantile(d, 0.75), "median": median(d), "mean": expectation(d),
                "p_optimum": sum(m for c, m in d.support if c == float(optimum)),
                "best_cut_cost": float(best_cost), "bitstring": bits,
                "distribution": [[c, m] for c, m in d.support],
            })
    if args.json:
        print(json.dumps({"instance": args.instance, "optimum": float(optimum), "runs": results}))
        return
    print(f"{args.instance}: {layout.total_qubits} qubits, optimum {optimum}")
    print(f"{'optimizer':<9} {'preset':<11} {'initial':>12} {'best':>12} {'q75':>6} {'median':>6} "
          f"{'mean':>8} {'P(opt)':>7} {'cut':>5}")
    for r in results:
        print(f"{r['optimizer']:<9} {r['preset']:<11} {r['initial']:>12.6g} {r['best']:>12.6g} "
              f"{r['q75']:>6g} {r['median']:>6g} {r['mean']:>8.3f} {r['p_optimum']:>7.3f} "
              f"{r['best_cut_cost']:>5g}")


if __name__ == "__main__":
    main()
