"""Dense complex linear algebra for small qubit registers.

Every function takes and returns plain ``numpy`` arrays and never mutates its
inputs. Subsystem 0 is the most significant bit of the computational index,
so ``tensor(a, b)`` puts ``a`` on the left of the ket.
"""

from __future__ import annotations

from functools import reduce
from typing import Sequence

import numpy as np

from .errors import DimensionError

UNITARY_TOL = 1e-10
HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-9

IDENTITY2 = np.eye(2, dtype=complex)
_PAULI_VECTOR = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def tensor(*operands: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more vectors or matrices, left to right."""
    if not operands:
        raise ValueError("tensor() needs at least one operand")
    return reduce(np.kron, (np.asarray(op, dtype=complex) for op in operands))


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape[-1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def dagger(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=complex).conj().T


def density_matrix(psi: np.ndarray) -> np.ndarray:
    """Projector |psi><psi| (not renormalized)."""
    psi = np.asarray(psi, dtype=complex).ravel()
    return np.outer(psi, psi.conj())


def is_unitary(m: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol)


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m, dtype=complex)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and bool(np.max(np.abs(m - m.conj().T)) <= tol)


def is_density_matrix(rho: np.ndarray, normalized: bool = True) -> bool:
    """Hermitian, positive semidefinite and (optionally) unit trace."""
    rho = np.asarray(rho, dtype=complex)
    if not is_hermitian(rho):
        return False
    if normalized and abs(np.trace(rho) - 1.0) > HERMITIAN_TOL:
        return False
    eigs = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    return bool(eigs.min() >= -PSD_TOL)


def n_qubits_of(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


def partial_trace(rho: np.ndarray, qubit_dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    The kept subsystems come back in ascending index order regardless of the
    order given in ``keep``.
    """
    rho = np.asarray(rho, dtype=complex)
    dims = [int(d) for d in qubit_dims]
    n = len(dims)
    total = int(np.prod(dims)) if dims else 1
    if rho.shape != (total, total):
        raise DimensionError(f"rho has shape {rho.shape}, expected {(total, total)}")
    keep = sorted(set(int(k) for k in keep))
    for k in keep:
        if not 0 <= k < n:
            raise IndexError(f"subsystem index {k} out of range for {n} subsystems")

    traced = [i for i in range(n) if i not in keep]
    t = rho.reshape(dims + dims)
    # trace the highest index first so the remaining axis numbers stay valid
    for offset, i in enumerate(sorted(traced, reverse=True)):
        m = n - offset
        t = np.trace(t, axis1=i, axis2=i + m)
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


def apply_operator(state: np.ndarray, op: np.ndarray, targets: Sequence[int], n_qubits: int) -> np.ndarray:
    """Apply a ``2^k x 2^k`` operator to qubits ``targets`` of a state vector.

    ``targets[0]`` is the most significant qubit of ``op``'s index. ``op`` need
    not be unitary, so the returned vector carries whatever weight is lost.
    """
    targets = [int(t) for t in targets]
    k = len(targets)
    op = np.asarray(op, dtype=complex)
    if op.shape != (2**k, 2**k):
        raise DimensionError(f"operator shape {op.shape} does not act on {k} qubits")
    if len(set(targets)) != k or any(not 0 <= t < n_qubits for t in targets):
        raise IndexError(f"bad target qubits {targets} for a {n_qubits}-qubit register")
    psi = np.asarray(state, dtype=complex).reshape([2] * n_qubits)
    psi = np.moveaxis(psi, targets, range(k))
    psi = np.tensordot(op.reshape([2] * (2 * k)), psi, axes=(list(range(k, 2 * k)), list(range(k))))
    psi = np.moveaxis(psi, range(k), targets)
    return psi.reshape(2**n_qubits)


def su2_exponential(axis, duration: float) -> np.ndarray:
    """exp(-i * duration * n.sigma / 2) in closed form.

    ``axis`` is a unit 3-vector or anything exposing one as ``.vector``.
    """
    n = np.asarray(getattr(axis, "vector", axis), dtype=float)
    if n.shape != (3,):
        raise DimensionError(f"axis must be a 3-vector, got shape {n.shape}")
    if abs(np.linalg.norm(n) - 1.0) > 1e-10:
        raise ValueError(f"axis {n} is not unit norm")
    n_sigma = n[0] * _PAULI_VECTOR[0] + n[1] * _PAULI_VECTOR[1] + n[2] * _PAULI_VECTOR[2]
    half = duration / 2.0
    return np.cos(half) * IDENTITY2 - 1j * np.sin(half) * n_sigma
