"""Named states, Pauli operators, interaction gates and Haar sampling.

Polarization encoding: |0> = |H>, |1> = |V>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .linalg import is_unitary, tensor

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class HamiltonianAxis:
    """Rotation axis n(theta, phi) of the free Hamiltonian n.sigma/2."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ConfigurationError("axis angles must be finite")
        if not -1e-12 <= self.theta <= math.pi + 1e-12:
            raise ConfigurationError(f"theta={self.theta} outside [0, pi]")
        object.__setattr__(self, "phi", self.phi % (2 * math.pi))

    @property
    def vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    @classmethod
    def z(cls) -> "HamiltonianAxis":
        return cls(0.0, 0.0)

    @classmethod
    def y(cls) -> "HamiltonianAxis":
        return cls(math.pi / 2, math.pi / 2)

    @classmethod
    def x(cls) -> "HamiltonianAxis":
        return cls(math.pi / 2, 0.0)

    @classmethod
    def from_vector(cls, v) -> "HamiltonianAxis":
        v = np.asarray(v, dtype=float)
        v = v / np.linalg.norm(v)
        return cls(math.acos(max(-1.0, min(1.0, v[2]))), math.atan2(v[1], v[0]))


def basis_ket(bits: str) -> np.ndarray:
    """Computational basis vector for a bit string such as ``"0101"``."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


_H = basis_ket("0")
_V = basis_ket("1")

_STATES = {
    "H": _H,
    "V": _V,
    "D": (_H + _V) / SQRT2,
    "A": (_H - _V) / SQRT2,
    "L": (_H - 1j * _V) / SQRT2,
    "R": (_H + 1j * _V) / SQRT2,
    "PsiMinus": (basis_ket("01") - basis_ket("10")) / SQRT2,
    "PsiPlus": (basis_ket("01") + basis_ket("10")) / SQRT2,
    "PhiMinus": (basis_ket("00") - basis_ket("11")) / SQRT2,
    "PhiPlus": (basis_ket("00") + basis_ket("11")) / SQRT2,
}

SINGLE_QUBIT_LABELS = ("H", "V", "D", "A", "L", "R")
BELL_LABELS = ("PsiMinus", "PsiPlus", "PhiMinus", "PhiPlus")


def named_state(label: str) -> np.ndarray:
    try:
        return _STATES[label].copy()
    except KeyError:
        raise ConfigurationError(f"unknown state label {label!r}") from None


def _projector_difference(plus: str, minus: str) -> np.ndarray:
    p, m = _STATES[plus], _STATES[minus]
    return np.outer(p, p.conj()) - np.outer(m, m.conj())


# Built from the eigenbasis definitions Z=|H><H|-|V><V|, X=|D><D|-|A><A|,
# Y=|R><R|-|L><L|; they coincide with the textbook matrices.
_PAULIS = {
    "I": np.eye(2, dtype=complex),
    "X": _projector_difference("D", "A"),
    "Y": _projector_difference("R", "L"),
    "Z": _projector_difference("H", "V"),
}


def pauli(label: str) -> np.ndarray:
    try:
        return _PAULIS[label].copy()
    except KeyError:
        raise ConfigurationError(f"unknown Pauli label {label!r}") from None


def hadamard() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2


def q_basis() -> list[np.ndarray]:
    """The six orthonormal four-probe vectors |m1>..|m6> spanning Q."""
    k = basis_ket
    return [
        k("0000"),
        (k("0001") + k("0010") + k("0100") + k("1000")) / 2,
        (k("0101") + k("0110") + k("1001") + k("1010")) / 2,
        (k("0011") + k("1100")) / SQRT2,
        (k("0111") + k("1011") + k("1101") + k("1110")) / 2,
        k("1111"),
    ]


def q_projector() -> np.ndarray:
    return sum(np.outer(m, m.conj()) for m in q_basis())


def probe_initial_state() -> np.ndarray:
    """Two singlets on probe pairs (P1, P2) and (P3, P4)."""
    return tensor(_STATES["PsiMinus"], _STATES["PsiMinus"])


@dataclass(frozen=True)
class InteractionGate:
    """A target-probe gate; index = 2 * target_bit + probe_bit."""

    label: str
    matrix: np.ndarray = field(repr=False)
    unitary: bool

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ConfigurationError(f"interaction gate must be 4x4, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


_SWAP = np.array(
    [[1, 0, 0, 0],
     [0, 0, 1, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1]],
    dtype=complex,
)

# (I (x) H) . G_PBS . (X (x) I), written out entrywise
_PBS_CIRCUIT_II = np.array(
    [[0, 0, 1, 0],
     [0, 0, 1, 0],
     [0, 1, 0, 0],
     [0, -1, 0, 0]],
    dtype=complex,
) / SQRT2

_GATE_ALIASES = {
    "SWAP": "SWAP",
    "I": "SWAP",
    "PBS_CIRCUIT_II": "PBS_CIRCUIT_II",
    "II": "PBS_CIRCUIT_II",
}


def interaction_gate(label: str) -> InteractionGate:
    """The fixed gate of circuit I (``"SWAP"``/``"I"``) or circuit II (``"PBS_CIRCUIT_II"``/``"II"``)."""
    try:
        name = _GATE_ALIASES[label]
    except KeyError:
        raise ConfigurationError(f"unknown interaction gate {label!r}") from None
    if name == "SWAP":
        return InteractionGate("SWAP", _SWAP, True)
    return InteractionGate("PBS_CIRCUIT_II", _PBS_CIRCUIT_II, False)


def custom_gate(matrix) -> InteractionGate:
    m = np.asarray(matrix, dtype=complex)
    return InteractionGate("CUSTOM", m, is_unitary(m) if m.shape == (4, 4) else False)


def haar_unitary(dim: int, seed) -> np.ndarray:
    """Haar-distributed unitary from a seed (or a ``numpy`` Generator).

    Ginibre matrix -> QR -> rescale each column of Q by the phase of the
    matching diagonal entry of R.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / SQRT2
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def haar_state(dim: int, seed) -> np.ndarray:
    """Haar-random pure state: the first column of a Haar unitary."""
    return haar_unitary(dim, seed)[:, 0].copy()
