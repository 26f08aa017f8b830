"""Dense-matrix references, independent of the simulator's in-place kernels."""
from functools import reduce

import numpy as np
from scipy.linalg import expm

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0])


def embed(ops: dict, n: int) -> np.ndarray:
    """Kronecker product with qubit 0 as the leftmost (most significant) factor."""
    return reduce(np.kron, [ops.get(q, I2) for q in range(n)])


def xy_term(n, a, b):
    return 0.5 * (embed({a: X, b: X}, n) + embed({a: Y, b: Y}, n))


def xy_unitary(n, a, b, angle):
    return expm(-1j * angle * xy_term(n, a, b))


def ring_hamiltonian(n, topology="ring"):
    bonds = [(j, j + 1) for j in range(n - 1)]
    if topology == "ring" and n > 2:
        bonds.append((n - 1, 0))
    return sum(xy_term(n, a, b) for a, b in bonds)


def weight_one_state(n, rng):
    psi = np.zeros(1 << n, dtype=complex)
    idx = [1 << (n - 1 - q) for q in range(n)]
    psi[idx] = rng.normal(size=n) + 1j * rng.normal(size=n)
    return psi / np.linalg.norm(psi)


def warm_start_closed_form(x, y, z, t):
    """Amplitudes of |1000>,|0100>,|0010>,|0001> after the 4-ring bond product on |0100>.

    Bonds act in the order (0,1):x, (1,2):y, (2,3):z, (3,0):t, each as
    cos(a) on the stay branch and -i sin(a) on the hop branch of a single
    excitation; bonds not touching the excitation act as identity.
    """
    cx, sx, cy, sy, cz, sz, ct, st = (np.cos(x), np.sin(x), np.cos(y), np.sin(y),
                                      np.cos(z), np.sin(z), np.cos(t), np.sin(t))
    return {
        "1000": -1j * sx * ct + 1j * cx * sy * sz * st,
        "0100": cx * cy,
        "0010": -1j * cx * sy * cz,
        "0001": -cx * sy * sz * ct - sx * st,
    }
