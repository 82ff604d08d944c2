"""Slow, loop-based reference implementations used only as test oracles."""

import itertools

import numpy as np


def kron_loops(a, b):
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    b = np.atleast_2d(np.asarray(b, dtype=complex))
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def partial_trace_loops(rho, n_qubits, keep):
    """Sum rho[(k, t), (k', t)] over every assignment t of the traced qubits."""
    keep = sorted(keep)
    traced = [q for q in range(n_qubits) if q not in keep]
    d = 2 ** len(keep)
    out = np.zeros((d, d), dtype=complex)

    def index(kept_bits, traced_bits):
        bits = [0] * n_qubits
        for q, b in zip(keep, kept_bits):
            bits[q] = b
        for q, b in zip(traced, traced_bits):
            bits[q] = b
        return int("".join(map(str, bits)) or "0", 2)

    kept_space = list(itertools.product((0, 1), repeat=len(keep)))
    for r, row_bits in enumerate(kept_space):
        for c, col_bits in enumerate(kept_space):
            for t in itertools.product((0, 1), repeat=len(traced)):
                out[r, c] += rho[index(row_bits, t), index(col_bits, t)]
    return out


def random_density(n_qubits, rng, rank=None):
    d = 2**n_qubits
    rank = rank or d
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_pure(dim, rng):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_unit_vector(rng):
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def two_qubit_embedding(op, q1, q2, n_qubits):
    """Full 2^n matrix of a 4x4 ``op`` on qubits (q1, q2), built entry by entry."""
    d = 2**n_qubits
    out = np.zeros((d, d), dtype=complex)

    def bit(x, q):
        return (x >> (n_qubits - 1 - q)) & 1

    for row in range(d):
        for col in range(d):
            # all other qubits must agree
            others_match = all(bit(row, q) == bit(col, q) for q in range(n_qubits) if q not in (q1, q2))
            if others_match:
                out[row, col] = op[2 * bit(row, q1) + bit(row, q2), 2 * bit(col, q1) + bit(col, q2)]
    return out


def one_qubit_embedding(op, q, n_qubits):
    return kron_loops(kron_loops(np.eye(2**q), op), np.eye(2 ** (n_qubits - q - 1)))


def brute_force_branch(initial, u0, gate, probe_vector):
    """Unnormalized post-selected system state, the whole circuit as one matrix."""
    n_sys = int(np.log2(len(initial)))
    n = n_sys + 4
    target = n_sys - 1
    singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
    psi = kron_loops(kron_loops(initial[:, None], singlet[:, None]), singlet[:, None])[:, 0]
    circuit = np.eye(2**n, dtype=complex)
    for k in range(4):
        circuit = one_qubit_embedding(u0, target, n) @ circuit
        circuit = two_qubit_embedding(gate, target, n_sys + k, n) @ circuit
    final = circuit @ psi
    bra = kron_loops(np.eye(2**n_sys), probe_vector.conj()[None, :])
    return bra @ final
