"""Feasibility-preserving variational s-t min-cut: path-register encoding, XY ring
mixer simulation, warm starts, cost-distribution objectives and batched resolution."""
from importlib import resources
from pathlib import Path as _FsPath

from .graph import Graph, load_graph, read_graph

BUNDLED = ("g7", "g10")


def bundled_text(name: str) -> str:
    return resources.files(__package__).joinpath("instances", f"{name}.txt").read_text(encoding="utf-8")


def bundled_instance(name: str) -> Graph:
    if name not in BUNDLED:
        raise KeyError(f"no bundled instance {name!r}; have {BUNDLED}")
    return load_graph(bundled_text(name))


def resolve_instance(ref: str) -> Graph:
    """A bundled instance name (``g7``, ``g10``) or a path to an instance file."""
    if ref in BUNDLED and not _FsPath(ref).exists():
        return bundled_instance(ref)
    return read_graph(ref)
