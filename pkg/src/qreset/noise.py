"""Higher-order SPDC emission as white noise on the reset state.

A source emitting pairs with probability p per pulse gives a twofold
coincidence rate C = p * M * eta, where M is the pump repetition rate and eta
the coincidence-level collection efficiency (the product of both arms'
efficiencies). Double-pair emission mixes the reset output with the
maximally mixed state at visibility 1/(1+4p) for circuit I and 1/(1+5p) for
circuit II.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DimensionError


@dataclass(frozen=True)
class SpdcParams:
    pair_rate_hz: float
    rep_rate_hz: float
    pair_efficiency: float

    def __post_init__(self):
        for name in ("pair_rate_hz", "rep_rate_hz", "pair_efficiency"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ConfigurationError(f"{name} must be finite and non-negative, got {value}")
        if self.pair_efficiency > 1:
            raise ConfigurationError(f"pair_efficiency must be <= 1, got {self.pair_efficiency}")

    @classmethod
    def from_arm_efficiency(cls, pair_rate_hz: float, rep_rate_hz: float, arm_efficiency: float) -> "SpdcParams":
        """Both arms share the same single-photon efficiency."""
        return cls(pair_rate_hz, rep_rate_hz, arm_efficiency**2)


def p_from_counts(params: SpdcParams) -> float:
    denominator = params.rep_rate_hz * params.pair_efficiency
    if denominator == 0:
        raise ConfigurationError("repetition rate and efficiency must be non-zero")
    return params.pair_rate_hz / denominator


_DOUBLE_PAIR_TERMS = {"I": 4, "II": 5}


def _check_circuit(circuit: str) -> int:
    try:
        return _DOUBLE_PAIR_TERMS[circuit]
    except KeyError:
        raise ConfigurationError(f"circuit must be 'I' or 'II', got {circuit!r}") from None


def visibility(p: float, circuit: str) -> float:
    """p^3 / (p^3 + k p^4) = 1 / (1 + k p), k = 4 (circuit I) or 5 (circuit II)."""
    k = _check_circuit(circuit)
    if not 0 <= p < 1:
        raise ConfigurationError(f"down-conversion probability must be in [0, 1), got {p}")
    return 1.0 / (1.0 + k * p)


@dataclass(frozen=True)
class WernerModel:
    p: float
    circuit: str

    @property
    def visibility(self) -> float:
        return visibility(self.p, self.circuit)


def apply_werner(rho_ideal, vis: float, n_qubits: int) -> np.ndarray:
    """vis * rho + (1 - vis) * I / 2^n."""
    rho = np.asarray(rho_ideal, dtype=complex)
    dim = 2**n_qubits
    if rho.shape != (dim, dim):
        raise DimensionError(f"rho has shape {rho.shape}, expected {(dim, dim)} for {n_qubits} qubits")
    if not 0 <= vis <= 1:
        raise ConfigurationError(f"visibility must be in [0, 1], got {vis}")
    return vis * rho + (1 - vis) * np.eye(dim) / dim


@dataclass(frozen=True)
class PredictedFidelities:
    single_I: float
    single_II: float
    ent_I: float
    ent_II: float

    def as_dict(self) -> dict[str, float]:
        return {"single_I": self.single_I, "single_II": self.single_II, "ent_I": self.ent_I, "ent_II": self.ent_II}


def predicted_fidelities(p: float) -> PredictedFidelities:
    """Closed forms for a pure ideal state: (1+v)/2 for one qubit, v + (1-v)/4 for the singlet."""
    v1, v2 = visibility(p, "I"), visibility(p, "II")
    return PredictedFidelities(
        single_I=(1 + v1) / 2,
        single_II=(1 + v2) / 2,
        ent_I=v1 + (1 - v1) / 4,
        ent_II=v2 + (1 - v2) / 4,
    )
