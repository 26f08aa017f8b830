"""Weighted directed s-t graphs: parsing, path enumeration and classical cut oracles."""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np


class GraphError(ValueError):
    """Malformed instance or invalid graph operation."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Arc:
    label: int
    tail: int
    head: int
    weight: Fraction


@dataclass(frozen=True)
class Graph:
    vertices: frozenset[int]
    arcs: tuple[Arc, ...]
    source: int
    sink: int

    def __post_init__(self):
        if self.source == self.sink:
            raise GraphError("source and sink coincide")
        for v in (self.source, self.sink):
            if v not in self.vertices:
                raise GraphError(f"vertex {v} not in graph")
        seen = set()
        for a in self.arcs:
            if a.label in seen:
                raise GraphError(f"duplicate label {a.label}")
            seen.add(a.label)
            if a.weight <= 0:
                raise GraphError(f"nonpositive weight on arc {a.label}")
            if a.tail == a.head:
                raise GraphError(f"self-loop on arc {a.label}")
            if a.tail not in self.vertices or a.head not in self.vertices:
                raise GraphError(f"arc {a.label} references unknown vertex")

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(a.label for a in self.arcs)

    def arc(self, label: int) -> Arc:
        for a in self.arcs:
            if a.label == label:
                return a
        raise GraphError(f"unknown arc label {label}")

    def weight(self, label: int) -> Fraction:
        return self.arc(label).weight

    def weights(self) -> dict[int, Fraction]:
        return {a.label: a.weight for a in self.arcs}

    def scaled_weights(self) -> tuple[dict[int, int], int]:
        """Integer weights and the common scale they were multiplied by."""
        scale = 1
        for a in self.arcs:
            scale = scale * a.weight.denominator // math.gcd(scale, a.weight.denominator)
        return {a.label: int(a.weight * scale) for a in self.arcs}, scale

    def out_arcs(self, v: int) -> list[Arc]:
        return sorted((a for a in self.arcs if a.tail == v), key=lambda a: a.label)

    def total_weight(self, labels: Iterable[int]) -> Fraction:
        w = self.weights()
        return sum((w[k] for k in set(labels)), Fraction(0))


@dataclass(frozen=True)
class Path:
    arc_labels: tuple[int, ...]
    vertices: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.arc_labels)

    def __len__(self):
        return len(self.arc_labels)


@dataclass(frozen=True)
class PathSet:
    paths: tuple[Path, ...]
    complete: bool

    def __len__(self):
        return len(self.paths)

    def __iter__(self) -> Iterator[Path]:
        return iter(self.paths)

    def __getitem__(self, i):
        return self.paths[i]

    @property
    def lengths(self) -> list[int]:
        return [p.length for p in self.paths]


def _format_weight(w: Fraction) -> str:
    if w.denominator == 1:
        return f"{w.numerator}.0"
    d = w.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{w.numerator}/{w.denominator}"
    digits = max(twos, fives)
    scaled = w * 10**digits
    sign = "-" if scaled < 0 else ""
    n = abs(int(scaled))
    return f"{sign}{n // 10**digits}.{n % 10**digits:0{digits}d}"


def load_graph(text: str) -> Graph:
    """Parse the line-oriented instance format (``v``, ``a``, ``s``, ``t`` records)."""
    n_vertices = None
    arcs: list[Arc] = []
    labels: dict[int, int] = {}
    source = sink = None
    source_line = sink_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, *fields = line.split()
        try:
            if kind == "v" and len(fields) == 1:
                n_vertices = int(fields[0])
                if n_vertices < 2:
                    raise GraphError("need at least 2 vertices", lineno)
            elif kind == "a" and len(fields) == 4:
                label, tail, head = (int(x) for x in fields[:3])
                weight = Fraction(fields[3])
                if weight <= 0:
                    raise GraphError(f"nonpositive weight {fields[3]}", lineno)
                if label in labels:
                    raise GraphError(f"duplicate label {label} (first on line {labels[label]})", lineno)
                if tail == head:
                    raise GraphError(f"self-loop on vertex {tail}", lineno)
                labels[label] = lineno
                arcs.append(Arc(label, tail, head, weight))
            elif kind == "s" and len(fields) == 1:
                source, source_line = int(fields[0]), lineno
            elif kind == "t" and len(fields) == 1:
                sink, sink_line = int(fields[0]), lineno
            else:
                raise GraphError(f"cannot parse record {line!r}", lineno)
        except (ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, GraphError):
                raise
            raise GraphError(f"cannot parse record {line!r}: {exc}", lineno) from None

    if n_vertices is None:
        raise GraphError("missing vertex count record 'v'")
    if source is None:
        raise GraphError("missing source record 's'")
    if sink is None:
        raise GraphError("missing sink record 't'")
    vertices = frozenset(range(1, n_vertices + 1))
    for v, ln in ((source, source_line), (sink, sink_line)):
        if v not in vertices:
            raise GraphError(f"vertex {v} out of range 1..{n_vertices}", ln)
    if source == sink:
        raise GraphError("source equals sink", sink_line)
    for a in arcs:
        for v in (a.tail, a.head):
            if v not in vertices:
                raise GraphError(f"arc {a.label} uses vertex {v} out of range", labels[a.label])
    if sorted(labels) != list(range(1, len(arcs) + 1)):
        raise GraphError("arc labels must be contiguous 1..|E|")
    return Graph(vertices, tuple(arcs), source, sink)


def dump_graph(g: Graph) -> str:
    lines = [f"v {max(g.vertices)}"]
    lines += [f"a {a.label} {a.tail} {a.head} {_format_weight(a.weight)}" for a in g.arcs]
    lines += [f"s {g.source}", f"t {g.sink}"]
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return load_graph(fh.read())


def enumerate_paths(g: Graph, limit: int = 10**6) -> PathSet:
    """Simple s-t paths by depth-first search, out-arcs taken in ascending label order."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    out = {v: g.out_arcs(v) for v in g.vertices}
    found: list[Path] = []
    arcs_stack: list[int] = []
    verts = [g.source]
    on_path = {g.source}
    truncated = False

    def dfs(v: int) -> bool:
        nonlocal truncated
        for a in out[v]:
            if a.head in on_path:
                continue
            arcs_stack.append(a.label)
            verts.append(a.head)
            if a.head == g.sink:
                if len(found) == limit:
                    truncated = True
                    return False
                found.append(Path(tuple(arcs_stack), tuple(verts)))
            else:
                on_path.add(a.head)
                keep_going = dfs(a.head)
                on_path.discard(a.head)
                if not keep_going:
                    return False
            arcs_stack.pop()
            verts.pop()
        return True

    dfs(g.source)
    return PathSet(tuple(found), complete=not truncated)


def has_st_path(g: Graph) -> bool:
    return g.sink in _reachable(g.source, [(a.tail, a.head) for a in g.arcs])


def _reachable(start: int, edges) -> set[int]:
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj.get(u, ()):
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def remove_arcs(g: Graph, labels: Iterable[int]) -> Graph:
    labels = set(labels)
    unknown = labels - set(g.labels)
    if unknown:
        raise GraphError(f"unknown arc labels {sorted(unknown)}")
    return Graph(g.vertices, tuple(a for a in g.arcs if a.label not in labels), g.source, g.sink)


def max_flow_min_cut(g: Graph) -> tuple[Fraction, frozenset[int]]:
    """Edmonds-Karp max flow; returns the flow value and the source-side residual cut."""
    w, scale = g.scaled_weights()
    # residual edges stored pairwise: edge e and its reverse e ^ 1
    head: list[int] = []
    cap: list[int] = []
    adj: dict[int, list[int]] = {v: [] for v in g.vertices}
    for a in g.arcs:
        adj[a.tail].append(len(head))
        head.append(a.head)
        cap.append(w[a.label])
        adj[a.head].append(len(head))
        head.append(a.tail)
        cap.append(0)

    flow = 0
    while True:
        parent_edge = {g.source: -1}
        queue = deque([g.source])
        while queue and g.sink not in parent_edge:
            u = queue.popleft()
            for e in adj[u]:
                v = head[e]
                if cap[e] > 0 and v not in parent_edge:
                    parent_edge[v] = e
                    queue.append(v)
        if g.sink not in parent_edge:
            break
        bottleneck = None
        v = g.sink
        while v != g.source:
            e = parent_edge[v]
            bottleneck = cap[e] if bottleneck is None else min(bottleneck, cap[e])
            v = head[e ^ 1]
        v = g.sink
        while v != g.source:
            e = parent_edge[v]
            cap[e] -= bottleneck
            cap[e ^ 1] += bottleneck
            v = head[e ^ 1]
        flow += bottleneck

    side = _reachable(g.source, [(head[e ^ 1], head[e]) for e in range(len(head)) if cap[e] > 0])
    cut = frozenset(a.label for a in g.arcs if a.tail in side and a.head not in side)
    return Fraction(flow, scale), cut


def min_cut_by_subsets(g: Graph) -> tuple[Fraction, frozenset[int]]:
    """Exhaustive oracle: cheapest arc subset whose removal disconnects s from t."""
    if not has_st_path(g):
        return Fraction(0), frozenset()
    w = g.weights()
    labels = g.labels
    best = None
    for r in range(1, len(labels) + 1):
        for subset in itertools.combinations(labels, r):
            value = sum((w[k] for k in subset), Fraction(0))
            if best is not None and value >= best[0]:
                continue
            if not has_st_path(remove_arcs(g, subset)):
                best = (value, frozenset(subset))
    return best


def random_graph(rng: np.random.Generator, n_vertices: int, n_arcs: int,
                 max_weight: int = 10) -> Graph:
    """Random simple digraph (no self-loops, no parallel arcs) with integer weights."""
    pairs = [(u, v) for u in range(1, n_vertices + 1) for v in range(1, n_vertices + 1) if u != v]
    n_arcs = min(n_arcs, len(pairs))
    chosen = rng.choice(len(pairs), size=n_arcs, replace=False)
    arcs = tuple(
        Arc(i + 1, pairs[c][0], pairs[c][1], Fraction(int(rng.integers(1, max_weight + 1))))
        for i, c in enumerate(sorted(chosen))
    )
    return Graph(frozenset(range(1, n_vertices + 1)), arcs, 1, n_vertices)
