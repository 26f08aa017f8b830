"""Dense statevector simulation of the feasibility-preserving ansatz.

Only three gate families exist here: X preparation of a basis state, the
diagonal cost phase, and the XY partial swap. Statevectors are plain complex
numpy arrays of length 2^n; index b is the bitstring of b with qubit 0 as the
most significant bit. Gate functions update the array in place and return it.

Sampling uses numpy's PCG64 generator seeded with the given unsigned integer.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .encoding import (QubitLayout, cost_diagonal, index_to_bitstring,
                       EncodingError)
from .graph import Graph
from .objectives import CostDistribution

MAX_QUBITS = 26
TOPOLOGIES = ("ring", "chain")


class SimulationError(ValueError):
    pass


def _n_qubits(state: np.ndarray) -> int:
    n = state.size.bit_length() - 1
    if 1 << n != state.size:
        raise SimulationError("state length is not a power of two")
    return n


def init_basis(n: int, ones: Sequence[int] = ()) -> np.ndarray:
    if n > MAX_QUBITS:
        raise SimulationError(f"{n} qubits exceeds the {MAX_QUBITS}-qubit cap")
    index = 0
    for q in set(ones):
        if not 0 <= q < n:
            raise SimulationError(f"qubit {q} out of range for n={n}")
        index |= 1 << (n - 1 - q)
    state = np.zeros(1 << n, dtype=np.complex128)
    state[index] = 1.0
    return state


def apply_xy(state: np.ndarray, q1: int, q2: int, angle: float) -> np.ndarray:
    """exp(-i * angle * (XX + YY)/2) on qubits q1, q2.

    Identity on |00> and |11>; rotates |01>, |10> by [[c, -is], [-is, c]].
    """
    n = _n_qubits(state)
    if q1 == q2 or not (0 <= q1 < n and 0 <= q2 < n):
        raise SimulationError(f"invalid qubit pair ({q1}, {q2}) for n={n}")
    if not state.flags.c_contiguous:
        raise SimulationError("state must be C-contiguous for in-place gates")
    a, b = sorted((q1, q2))
    view = state.reshape(1 << a, 2, 1 << (b - a - 1), 2, 1 << (n - b - 1))
    c, s = np.cos(angle), np.sin(angle)
    x01 = view[:, 0, :, 1, :].copy()
    x10 = view[:, 1, :, 0, :]
    view[:, 0, :, 1, :] = c * x01 - 1j * s * x10
    view[:, 1, :, 0, :] = c * x10 - 1j * s * x01
    return state


def register_bonds(size: int, topology: str = "ring") -> list[tuple[int, int]]:
    """Bonds (local qubit pairs) of one register, in application order.

    A ring closes with (size-1, 0); for size 2 that repeats the single bond.
    """
    if topology not in TOPOLOGIES:
        raise SimulationError(f"unknown topology {topology!r}")
    if size < 2:
        return []
    bonds = [(j, j + 1) for j in range(size - 1)]
    if topology == "ring":
        bonds.append((size - 1, 0))
    return bonds


def apply_mixer_layer(state: np.ndarray, layout: QubitLayout, beta: float,
                      topology: str = "ring", sweeps: int = 1) -> np.ndarray:
    if _n_qubits(state) != layout.total_qubits:
        raise SimulationError("state does not match layout")
    if sweeps < 1:
        raise SimulationError("sweeps must be >= 1")
    step = beta / sweeps
    for i in range(layout.n_paths):
        off = layout.offsets[i]
        bonds = register_bonds(layout.paths[i].length, topology)
        for _ in range(sweeps):
            for j, k in bonds:
                apply_xy(state, off + j, off + k, step)
    return state


def apply_cost_phase(state: np.ndarray, costs: np.ndarray, gamma: float) -> np.ndarray:
    """Multiply each amplitude by exp(-i gamma cost); ``costs`` is the full cost diagonal."""
    if costs.shape != state.shape:
        raise SimulationError("cost diagonal does not match state")
    state *= np.exp(-1j * gamma * costs)
    return state


@dataclass(frozen=True)
class AnsatzParams:
    """Warm start (one position per path plus per-bond angles) and p cost/mixer layers.

    ``positions`` are 0-based within each path register. ``warm_angles[i]``
    holds one angle per bond of register i, in :func:`register_bonds` order.
    """
    positions: tuple[int, ...]
    warm_angles: tuple[tuple[float, ...], ...]
    gammas: tuple[float, ...] = ()
    betas: tuple[float, ...] = ()
    topology: str = "ring"
    sweeps: int = 1

    def __post_init__(self):
        if len(self.gammas) != len(self.betas):
            raise SimulationError("gammas and betas must have equal length")
        if self.topology not in TOPOLOGIES:
            raise SimulationError(f"unknown topology {self.topology!r}")
        if self.sweeps < 1:
            raise SimulationError("sweeps must be >= 1")
        if len(self.positions) != len(self.warm_angles):
            raise SimulationError("one angle vector per warm-start position")

    @property
    def depth(self) -> int:
        return len(self.gammas)

    @classmethod
    def uniform(cls, layout: QubitLayout, positions: Sequence[int], angle: float = 0.0,
                depth: int = 0, topology: str = "ring", sweeps: int = 1,
                gamma: float = 0.0, beta: float = 0.0) -> "AnsatzParams":
        angles = tuple(tuple(float(angle) for _ in register_bonds(p.length, topology))
                       for p in layout.paths)
        return cls(tuple(positions), angles, (gamma,) * depth, (beta,) * depth, topology, sweeps)

    def check(self, layout: QubitLayout) -> None:
        if len(self.positions) != layout.n_paths:
            raise SimulationError(f"need {layout.n_paths} warm-start positions")
        for i, p in enumerate(layout.paths):
            if not 0 <= self.positions[i] < p.length:
                raise SimulationError(f"position {self.positions[i]} outside path {i}")
            nb = len(register_bonds(p.length, self.topology))
            if len(self.warm_angles[i]) != nb:
                raise SimulationError(f"path {i} needs {nb} warm-start angles, got {len(self.warm_angles[i])}")

    def vector(self) -> np.ndarray:
        """Flat parameter vector: warm-start angles, then gammas, then betas."""
        flat = [a for vec in self.warm_angles for a in vec]
        return np.array(flat + list(self.gammas) + list(self.betas), dtype=float)

    def layer_vector(self) -> np.ndarray:
        return np.array(list(self.gammas) + list(self.betas), dtype=float)

    def with_layer_vector(self, theta: Sequence[float]) -> "AnsatzParams":
        p = self.depth
        if len(theta) != 2 * p:
            raise SimulationError(f"layer vector has length {len(theta)}, expected {2 * p}")
        theta = [float(t) for t in theta]
        return replace(self, gammas=tuple(theta[:p]), betas=tuple(theta[p:]))

    def with_vector(self, theta: Sequence[float]) -> "AnsatzParams":
        theta = [float(t) for t in theta]
        n_warm = sum(len(v) for v in self.warm_angles)
        if len(theta) != n_warm + 2 * self.depth:
            raise SimulationError(f"parameter vector has length {len(theta)}, expected {n_warm + 2 * self.depth}")
        angles, k = [], 0
        for vec in self.warm_angles:
            angles.append(tuple(theta[k:k + len(vec)]))
            k += len(vec)
        p = self.depth
        return replace(self, warm_angles=tuple(angles),
                       gammas=tuple(theta[k:k + p]), betas=tuple(theta[k + p:k + 2 * p]))


def prepare_warm_start(layout: QubitLayout, params: AnsatzParams) -> np.ndarray:
    params.check(layout)
    ones = [layout.qubit(i, pos) for i, pos in enumerate(params.positions)]
    state = init_basis(layout.total_qubits, ones)
    for i, p in enumerate(layout.paths):
        off = layout.offsets[i]
        for (j, k), angle in zip(register_bonds(p.length, params.topology), params.warm_angles[i]):
            if angle:
                apply_xy(state, off + j, off + k, angle)
    return state


def run_ansatz(layout: QubitLayout, g: Graph, params: AnsatzParams,
               costs: np.ndarray | None = None) -> np.ndarray:
    """Warm start followed by p rounds of cost phase and mixer layer."""
    state = prepare_warm_start(layout, params)
    if params.depth and costs is None:
        costs = cost_diagonal(layout, g)
    for gamma, beta in zip(params.gammas, params.betas):
        apply_cost_phase(state, costs, gamma)
        apply_mixer_layer(state, layout, beta, params.topology, params.sweeps)
    return state


def probabilities(state: np.ndarray) -> np.ndarray:
    return np.abs(state) ** 2


def exact_distribution(state: np.ndarray, layout: QubitLayout, g: Graph,
                       costs: np.ndarray | None = None) -> CostDistribution:
    n = _n_qubits(state)
    if n != layout.total_qubits:
        raise SimulationError("state does not match layout")
    probs = probabilities(state)
    support = np.flatnonzero(probs > 0)
    c = costs[support] if costs is not None else cost_diagonal(layout, g, support.astype(np.int64))
    p = probs[support] / probs[support].sum()
    masses: dict[float, float] = {}
    for cost_value, mass in zip(c.tolist(), p.tolist()):
        masses[cost_value] = masses.get(cost_value, 0.0) + mass
    per_bitstring = {index_to_bitstring(int(b), n): float(m) for b, m in zip(support, p)}
    return CostDistribution.from_masses(masses, source="exact", per_bitstring=per_bitstring)


def sample(state: np.ndarray, shots: int, seed: int) -> dict[str, int]:
    """Multinomial draw of ``shots`` measurements; returns bitstring -> count."""
    if shots < 1:
        raise SimulationError("shots must be >= 1")
    n = _n_qubits(state)
    probs = probabilities(state)
    support = np.flatnonzero(probs > 0)
    p = probs[support] / probs[support].sum()
    rng = np.random.Generator(np.random.PCG64(seed))
    counts = rng.multinomial(shots, p)
    return {index_to_bitstring(int(b), n): int(k) for b, k in zip(support, counts) if k}


def empirical_distribution(counts: dict[str, int], layout: QubitLayout, g: Graph,
                           seed: int | None = None) -> CostDistribution:
    n = layout.total_qubits
    shots = sum(counts.values())
    idx = np.array([int(b, 2) for b in counts], dtype=np.int64)
    c = cost_diagonal(layout, g, idx)
    masses: dict[float, float] = {}
    for cost_value, k in zip(c.tolist(), counts.values()):
        masses[cost_value] = masses.get(cost_value, 0.0) + k / shots
    per_bitstring = {b: k / shots for b, k in counts.items()}
    if any(len(b) != n for b in counts):
        raise EncodingError("sampled bitstring does not match layout")
    return CostDistribution.from_masses(masses, source="empirical", shots=shots, seed=seed,
                                        per_bitstring=per_bitstring)


def sampled_costs(counts: dict[str, int], layout: QubitLayout, g: Graph) -> list[float]:
    idx = np.array([int(b, 2) for b in counts], dtype=np.int64)
    c = cost_diagonal(layout, g, idx)
    out: list[float] = []
    for cost_value, k in zip(c.tolist(), counts.values()):
        out.extend([cost_value] * k)
    return out


def state_to_json(state: np.ndarray) -> dict:
    return {"n": _n_qubits(state), "amps": [[float(a.real), float(a.imag)] for a in state]}
