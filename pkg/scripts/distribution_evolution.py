"""Follow the cost distribution while the optimizer trains, one line per improvement.

Example: python3 scripts/distribution_evolution.py --instance g7 --optimizer powell --objective cvar:0.25
"""
import argparse

from mincut_qaoa import resolve_instance
from mincut_qaoa.encoding import build_layout
from mincut_qaoa.graph import enumerate_paths
from mincut_qaoa.iterative import greedy_warm_start
from mincut_qaoa.objectives import ObjectiveSpec
from mincut_qaoa.optimizers import OptimizerConfig
from mincut_qaoa.simulator import AnsatzParams
from mincut_qaoa.variational import optimize_ansatz


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instance", default="g7")
    ap.add_argument("--objective", default="f1:unbalanced")
    ap.add_argument("--optimizer", choices=["powell", "genetic"], default="powell")
    ap.add_argument("--budget", type=int, default=150)
    ap.add_argument("--depth", type=int, default=1)
    ap.add_argument("--warm-angle", type=float, default=0.1)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    g = resolve_instance(args.instance)
    layout = build_layout(enumerate_paths(g))
    template = AnsatzParams.uniform(layout, greedy_warm_start(layout, g), args.warm_angle,
                                    depth=args.depth, gamma=0.1, beta=0.3)
    spec = ObjectiveSpec.parse(args.objective)
    config = OptimizerConfig(method=args.optimizer, budget=args.budget, seed=args.seed,
                             population=16, parents=4)
    res = optimize_ansatz(layout, g, template, spec, config, record_snapshots=True)
    best = float("inf")
    print(f"{'eval':>5} {'objective':>14}  top cost masses")
    for i, ((_, value), snap) in enumerate(zip(res.trace.evaluations, res.trace.snapshots)):
        if value < best:
            best = value
            top = "  ".join(f"{c:g}:{m:.3f}" for c, m in snap["top"])
            print(f"{i:>5} {value:>14.6g}  {top}")
    print(f"final: {len(res.trace.evaluations)} evaluations, best {res.value:.6g}")


if __name__ == "__main__":
    main()
