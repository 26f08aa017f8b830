import numpy as np
import pytest

from mincut_qaoa import bundled_instance
from mincut_qaoa.encoding import build_layout
from mincut_qaoa.graph import Path, enumerate_paths, has_st_path, random_graph

SEED = 20240611


@pytest.fixture(scope="session")
def g7():
    return bundled_instance("g7")


@pytest.fixture(scope="session")
def g10():
    return bundled_instance("g10")


@pytest.fixture(scope="session")
def layout7(g7):
    return build_layout(enumerate_paths(g7))


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def chain_path(n):
    """A single path of n arcs over vertices 1..n+1."""
    return Path(tuple(range(1, n + 1)), tuple(range(1, n + 2)))


def random_connected_graph(rng, max_vertices=8, max_arcs=14, max_feasible=10**6,
                           max_qubits=None):
    """Random instance with at least one s-t path and a bounded feasible space."""
    while True:
        nv = int(rng.integers(3, max_vertices + 1))
        na = int(rng.integers(nv - 1, min(max_arcs, nv * (nv - 1)) + 1))
        g = random_graph(rng, nv, na)
        if not has_st_path(g):
            continue
        ps = enumerate_paths(g, 10**4)
        if not ps.complete:
            continue
        layout = build_layout(ps)
        if layout.n_feasible() > max_feasible:
            continue
        if max_qubits is not None and layout.total_qubits > max_qubits:
            continue
        return g
