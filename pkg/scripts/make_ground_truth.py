"""Regenerate instances/<name>.truth.json for the bundled instances from the classical oracles."""
import json
from pathlib import Path

from mincut_qaoa import BUNDLED, bundled_instance
from mincut_qaoa.encoding import brute_force_min, build_layout
from mincut_qaoa.graph import enumerate_paths, max_flow_min_cut, min_cut_by_subsets

OUT = Path(__file__).resolve().parents[1] / "src" / "mincut_qaoa" / "instances"


def ground_truth(name: str) -> dict:
    g = bundled_instance(name)
    flow, flow_cut = max_flow_min_cut(g)
    subset_value, subset_cut = min_cut_by_subsets(g)
    paths = enumerate_paths(g)
    layout = build_layout(paths)
    bf_value, bf_bits = brute_force_min(layout, g)
    return {
        "instance": name,
        "vertices": len(g.vertices),
        "arcs": len(g.arcs),
        "paths": [list(p.arc_labels) for p in paths],
        "qubits": layout.total_qubits,
        "feasible_configurations": layout.n_feasible(),
        "max_flow": str(flow),
        "max_flow_cut": sorted(flow_cut),
        "subset_min": str(subset_value),
        "subset_cut": sorted(subset_cut),
        "brute_force_min": str(bf_value),
        "brute_force_bitstring": bf_bits,
    }


if __name__ == "__main__":
    for name in BUNDLED:
        truth = ground_truth(name)
        path = OUT / f"{name}.truth.json"
        path.write_text(json.dumps(truth, indent=2) + "\n", encoding="utf-8")
        print(f"{path.name}: min cut {truth['max_flow']} via {truth['max_flow_cut']}")
