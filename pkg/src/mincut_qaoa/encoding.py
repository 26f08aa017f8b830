"""One-hot path-register encoding of s-t cuts.

Each path gets a register with one qubit per arc position; a register holding
exactly one 1 selects the arc removed on that path. An arc is paid for once no
matter how many registers select it. Bitstrings are written qubit 0 first, and
basis index ``b`` has qubit 0 as its most significant bit.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graph import Graph, PathSet, Path

DEFAULT_BRUTE_FORCE_CAP = 10**7
DEFAULT_MULTIPLICITY_CAP = 20


class EncodingError(ValueError):
    pass


@dataclass(frozen=True)
class QubitLayout:
    paths: tuple[Path, ...]
    offsets: tuple[int, ...]
    total_qubits: int
    arc_positions: dict[int, tuple[int, ...]]

    @property
    def n_paths(self) -> int:
        return len(self.paths)

    @property
    def register_sizes(self) -> tuple[int, ...]:
        return tuple(p.length for p in self.paths)

    def qubit(self, path: int, position: int) -> int:
        """Qubit of ``position`` (0-based) on ``path`` (0-based)."""
        if not 0 <= position < self.paths[path].length:
            raise EncodingError(f"position {position} outside path {path}")
        return self.offsets[path] + position

    def register(self, path: int) -> range:
        return range(self.offsets[path], self.offsets[path] + self.paths[path].length)

    def arc_of_qubit(self, q: int) -> int:
        i = int(np.searchsorted(self.offsets, q, side="right")) - 1
        return self.paths[i].arc_labels[q - self.offsets[i]]

    def locate(self, q: int) -> tuple[int, int]:
        """(path, position) owning qubit ``q``."""
        if not 0 <= q < self.total_qubits:
            raise EncodingError(f"qubit {q} out of range")
        i = int(np.searchsorted(self.offsets, q, side="right")) - 1
        return i, q - self.offsets[i]

    def n_feasible(self) -> int:
        return int(np.prod(self.register_sizes, dtype=object))

    def to_json(self) -> dict:
        return {
            "offsets": list(self.offsets),
            "registers": [list(p.arc_labels) for p in self.paths],
            "total_qubits": self.total_qubits,
            "arc_positions": {str(k): list(v) for k, v in sorted(self.arc_positions.items())},
        }


def build_layout(paths: PathSet | Sequence[Path]) -> QubitLayout:
    paths = tuple(paths)
    if not paths:
        raise EncodingError("empty path set")
    offsets = []
    arc_positions: dict[int, list[int]] = {}
    q = 0
    for p in paths:
        if p.length < 1:
            raise EncodingError("path with no arcs")
        offsets.append(q)
        for label in p.arc_labels:
            arc_positions.setdefault(label, []).append(q)
            q += 1
    return QubitLayout(paths, tuple(offsets), q,
                       {k: tuple(v) for k, v in sorted(arc_positions.items())})


def as_bits(c, layout: QubitLayout) -> np.ndarray:
    """Normalise a configuration (bitstring, sequence of 0/1) to a uint8 array."""
    if isinstance(c, str):
        bits = np.array([int(ch) for ch in c], dtype=np.uint8)
    else:
        bits = np.asarray(c, dtype=np.uint8)
    if bits.shape != (layout.total_qubits,):
        raise EncodingError(f"configuration has {bits.size} bits, layout needs {layout.total_qubits}")
    return bits


def bits_to_str(bits) -> str:
    return "".join(str(int(b)) for b in bits)


def index_to_bitstring(index: int, n: int) -> str:
    return format(index, f"0{n}b")


def positions_to_bits(positions: Sequence[int], layout: QubitLayout) -> np.ndarray:
    """One-hot configuration selecting ``positions[i]`` (0-based) on path ``i``."""
    if len(positions) != layout.n_paths:
        raise EncodingError(f"need {layout.n_paths} positions, got {len(positions)}")
    bits = np.zeros(layout.total_qubits, dtype=np.uint8)
    for i, pos in enumerate(positions):
        bits[layout.qubit(i, pos)] = 1
    return bits


def decode(c, layout: QubitLayout) -> frozenset[int]:
    """Removed arcs: an arc is removed iff any of its occurrence qubits is set."""
    bits = as_bits(c, layout)
    return frozenset(k for k, qs in layout.arc_positions.items() if any(bits[q] for q in qs))


def cost(c, layout: QubitLayout, g: Graph) -> Fraction:
    return g.total_weight(decode(c, layout))


def is_feasible(c, layout: QubitLayout) -> bool:
    bits = as_bits(c, layout)
    return all(int(bits[r.start:r.stop].sum()) == 1
               for r in (layout.register(i) for i in range(layout.n_paths)))


def _arc_masks(layout: QubitLayout) -> dict[int, int]:
    n = layout.total_qubits
    return {k: sum(1 << (n - 1 - q) for q in qs) for k, qs in layout.arc_positions.items()}


def cost_diagonal(layout: QubitLayout, g: Graph, indices: np.ndarray | None = None) -> np.ndarray:
    """Cost of every basis state (or of ``indices``), exact up to the final float division."""
    n = layout.total_qubits
    if indices is None:
        indices = np.arange(1 << n, dtype=np.int64)
    w, scale = g.scaled_weights()
    total = np.zeros(indices.shape, dtype=np.int64)
    for k, mask in _arc_masks(layout).items():
        total += w[k] * ((indices & mask) != 0)
    return total / scale


def feasible_indices(layout: QubitLayout) -> np.ndarray:
    """Basis indices of all one-hot configurations, ascending."""
    n = layout.total_qubits
    idx = np.zeros(1, dtype=np.int64)
    for i in range(layout.n_paths):
        choices = np.array([1 << (n - 1 - q) for q in layout.register(i)], dtype=np.int64)
        idx = (idx[:, None] + choices[None, :]).ravel()
    return np.sort(idx)


def feasibility_mask(layout: QubitLayout) -> np.ndarray:
    """Boolean array over all 2^n basis states, True on one-hot configurations."""
    mask = np.zeros(1 << layout.total_qubits, dtype=bool)
    mask[feasible_indices(layout)] = True
    return mask


def brute_force_min(layout: QubitLayout, g: Graph,
                    cap: int = DEFAULT_BRUTE_FORCE_CAP,
                    chunk: int = 1 << 18) -> tuple[Fraction, str]:
    """Minimum cost over all feasible configurations.

    Ties go to the lexicographically smallest bitstring. Costs are accumulated
    in integer-scaled weights, so the comparison is exact.
    """
    sizes = layout.register_sizes
    total = layout.n_feasible()
    if total > cap:
        raise EncodingError(f"{total} feasible configurations exceed cap {cap}")
    w, scale = g.scaled_weights()
    arc_table = [np.array(p.arc_labels, dtype=np.int64) for p in layout.paths]
    best_cost = None
    best_choice = None
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total), dtype=np.int64)
        choice = np.stack(np.unravel_index(flat, sizes), axis=1)
        chosen = np.stack([arc_table[i][choice[:, i]] for i in range(len(sizes))], axis=1)
        costs = np.zeros(len(flat), dtype=np.int64)
        for k in layout.arc_positions:
            costs += w[k] * (chosen == k).any(axis=1)
        m = costs.min()
        # lexicographically smallest bitstring = latest position on the earliest register
        tied = choice[costs == m]
        order = np.lexsort(tuple(-tied[:, i] for i in reversed(range(len(sizes)))))
        cand = tuple(int(x) for x in tied[order[0]])
        if best_cost is None or m < best_cost or (m == best_cost and _lex_key(cand) < _lex_key(best_choice)):
            best_cost, best_choice = int(m), cand
    bits = positions_to_bits(best_choice, layout)
    return Fraction(best_cost, scale), bits_to_str(bits)


def _lex_key(choice):
    return tuple(-c for c in choice)


def iter_feasible(layout: QubitLayout):
    """Yield every one-hot configuration as a tuple of positions (0-based)."""
    return itertools.product(*(range(s) for s in layout.register_sizes))


@dataclass(frozen=True)
class PauliTermSum:
    """Diagonal operator ``offset + sum(coeff * prod(Z_q for q in support))``."""
    terms: dict[frozenset[int], Fraction]
    offset: Fraction
    n_qubits: int

    def evaluate(self, c) -> Fraction:
        bits = [int(ch) for ch in c] if isinstance(c, str) else [int(b) for b in c]
        total = self.offset
        for support, coeff in self.terms.items():
            sign = (-1) ** sum(bits[q] for q in support)
            total += coeff * sign
        return total

    def evaluate_all(self, indices: np.ndarray | None = None) -> np.ndarray:
        n = self.n_qubits
        if indices is None:
            indices = np.arange(1 << n, dtype=np.int64)
        out = np.full(indices.shape, float(self.offset))
        for support, coeff in self.terms.items():
            mask = sum(1 << (n - 1 - q) for q in support)
            parity = np.bitwise_count(indices & mask) & 1
            out += float(coeff) * (1 - 2 * parity.astype(np.float64))
        return out

    def to_json(self) -> dict:
        return {
            "terms": [{"coeff": float(c), "support": sorted(s)}
                      for s, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), sorted(t[0])))],
            "offset": float(self.offset),
        }


def pauli_cost_terms(layout: QubitLayout, g: Graph,
                     multiplicity_cap: int = DEFAULT_MULTIPLICITY_CAP) -> PauliTermSum:
    """Expand sum_k w_k (1 - prod_{q in Q_k} (1 + Z_q)/2) into Z-monomials.

    With x = (1 - Z)/2, (1 - x) = (1 + Z)/2, so each arc contributes
    w_k - w_k/2^m * sum over all subsets T of Q_k of Z_T.
    """
    terms: dict[frozenset[int], Fraction] = {}
    offset = Fraction(0)
    for k, qs in layout.arc_positions.items():
        m = len(qs)
        if m > multiplicity_cap:
            raise EncodingError(f"arc {k} occurs {m} times, cap is {multiplicity_cap}")
        w = g.weight(k)
        share = w / 2**m
        offset += w - share
        for r in range(1, m + 1):
            for support in itertools.combinations(qs, r):
                key = frozenset(support)
                terms[key] = terms.get(key, Fraction(0)) - share
    terms = {s: c for s, c in terms.items() if c != 0}
    return PauliTermSum(terms, offset, layout.total_qubits)
