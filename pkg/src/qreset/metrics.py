"""Figures of merit: overlap fidelity, Bloch vectors, correlators and CHSH."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .linalg import tensor
from .quantum import pauli

_X, _Y, _Z = pauli("X"), pauli("Y"), pauli("Z")


def _square(rho, dim: int | None = None) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {rho.shape}")
    if dim is not None and rho.shape[0] != dim:
        raise DimensionError(f"expected a {dim}x{dim} density matrix, got {rho.shape}")
    return rho


def overlap_fidelity(rho, sigma) -> float:
    """Re Tr(rho sigma), clipped to [0, 1 + 1e-10].

    This is the state fidelity only when one argument is pure; it is the
    figure of merit used for every reported number here.
    """
    rho, sigma = _square(rho), _square(sigma)
    if rho.shape != sigma.shape:
        raise DimensionError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
    value = float(np.einsum("ij,ji->", rho, sigma).real)
    return min(max(value, 0.0), 1.0 + 1e-10)


def expectation(rho, observable) -> float:
    return float(np.einsum("ij,ji->", _square(rho), np.asarray(observable, dtype=complex)).real)


def bloch_coords(rho) -> tuple[float, float, float]:
    rho = _square(rho, 2)
    return expectation(rho, _X), expectation(rho, _Y), expectation(rho, _Z)


def correlator(rho2, label: str) -> float:
    """Two-qubit Pauli correlator such as ``"XX"`` or ``"ZY"``."""
    rho2 = _square(rho2, 4)
    if len(label) != 2:
        raise ValueError(f"correlator label must name two Paulis, got {label!r}")
    return expectation(rho2, tensor(pauli(label[0]), pauli(label[1])))


def entanglement_fidelity(rho2) -> float:
    """Singlet fidelity from the XX, YY and ZZ correlators."""
    rho2 = _square(rho2, 4)
    return (1.0 - correlator(rho2, "XX") - correlator(rho2, "YY") - correlator(rho2, "ZZ")) / 4.0


@dataclass(frozen=True)
class ChshSettings:
    """Analyzer angles; each defines the observable cos(2w) Z + sin(2w) X."""

    a: float
    a_prime: float
    b: float
    b_prime: float

    def __post_init__(self):
        if not all(math.isfinite(w) for w in (self.a, self.a_prime, self.b, self.b_prime)):
            raise ValueError("CHSH angles must be finite")

    @classmethod
    def singlet_optimal(cls) -> "ChshSettings":
        # E(u, w) = -cos 2(u - w) for the singlet; these reach 2*sqrt(2)
        return cls(0.0, math.pi / 4, math.pi / 8, 7 * math.pi / 8)


def analyzer(w: float) -> np.ndarray:
    return math.cos(2 * w) * _Z + math.sin(2 * w) * _X


def correlation(rho2, u: float, w: float) -> float:
    return expectation(_square(rho2, 4), tensor(analyzer(u), analyzer(w)))


def chsh_value(rho2, settings: ChshSettings | None = None) -> float:
    """|E(a,b) + E(a,b') + E(a',b) - E(a',b')|."""
    rho2 = _square(rho2, 4)
    s = settings or ChshSettings.singlet_optimal()
    return abs(
        correlation(rho2, s.a, s.b)
        + correlation(rho2, s.a, s.b_prime)
        + correlation(rho2, s.a_prime, s.b)
        - correlation(rho2, s.a_prime, s.b_prime)
    )
