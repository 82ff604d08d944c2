"""The resetting engine.

The target evolves under U0 = exp(-i T n.sigma/2), meets probe P1 through the
interaction gate, evolves again, meets P2, and so on through P4. The probes
start in two singlets and are finally projected; branches that land in the
six-dimensional subspace Q leave the target in its initial state.

Register layout: [ancilla,] target, P1, P2, P3, P4 with the first listed
qubit most significant. Interactions are instantaneous and the probes do not
evolve between them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import ConfigurationError
from .linalg import apply_operator, density_matrix, su2_exponential, tensor
from .metrics import bloch_coords, overlap_fidelity
from .quantum import (
    BELL_LABELS,
    HamiltonianAxis,
    InteractionGate,
    basis_ket,
    haar_unitary,
    custom_gate,
    named_state,
    probe_initial_state,
    q_basis,
    q_projector,
)

N_PROBES = 4
PROBE_DIM = 2**N_PROBES
# below this a branch is reported as impossible
PROBABILITY_FLOOR = 1e-12


class Mode(str, Enum):
    SINGLE = "SINGLE"
    ENTANGLED = "ENTANGLED"


@dataclass(frozen=True)
class OutcomeFilter:
    """Which probe projections to report.

    Build one with the classmethods rather than by hand.
    """

    kind: str
    q_index: int | None = None
    bell: tuple[str, str] | None = None
    patterns: tuple[str, ...] = ()
    include_complement: bool = False

    def __post_init__(self):
        if self.kind == "Q_VECTOR":
            if self.q_index not in range(1, 7):
                raise ConfigurationError(f"Q vector index must be 1..6, got {self.q_index}")
        elif self.kind == "DOUBLE_BSM":
            if self.bell is None or len(self.bell) != 2 or any(b not in BELL_LABELS for b in self.bell):
                raise ConfigurationError(f"DOUBLE_BSM needs two Bell labels from {BELL_LABELS}, got {self.bell}")
        elif self.kind == "PROBE_Z_PATTERN":
            if not self.patterns:
                raise ConfigurationError("PROBE_Z_PATTERN needs at least one pattern")
            for p in self.patterns:
                if len(p) != N_PROBES or set(p) - {"0", "1"}:
                    raise ConfigurationError(f"probe pattern must be {N_PROBES} bits, got {p!r}")
            if len(set(self.patterns)) != len(self.patterns):
                raise ConfigurationError("duplicate probe patterns")
        elif self.kind != "ALL_Q":
            raise ConfigurationError(f"unknown filter kind {self.kind!r}")

    @classmethod
    def q_vector(cls, index: int) -> "OutcomeFilter":
        return cls("Q_VECTOR", q_index=index)

    @classmethod
    def double_bsm(cls, first: str = "PsiPlus", second: str = "PsiPlus") -> "OutcomeFilter":
        return cls("DOUBLE_BSM", bell=(first, second))

    @classmethod
    def probe_z(cls, *patterns: str) -> "OutcomeFilter":
        return cls("PROBE_Z_PATTERN", patterns=tuple(patterns))

    @classmethod
    def all_q(cls, include_complement: bool = False) -> "OutcomeFilter":
        return cls("ALL_Q", include_complement=include_complement)

    def projectors(self) -> list[tuple[str, np.ndarray]]:
        """(label, rows) pairs; the rows are an orthonormal basis of each outcome's probe subspace."""
        if self.kind == "Q_VECTOR":
            return [(f"m{self.q_index}", q_basis()[self.q_index - 1][None, :])]
        if self.kind == "DOUBLE_BSM":
            a, b = self.bell
            return [(f"{a}x{b}", tensor(named_state(a), named_state(b))[None, :])]
        if self.kind == "PROBE_Z_PATTERN":
            return [(f"z{p}", basis_ket(p)[None, :]) for p in self.patterns]
        out = [(f"m{i + 1}", m[None, :]) for i, m in enumerate(q_basis())]
        if self.include_complement:
            out.append(("reject", _complement_basis()))
        return out


def _complement_basis() -> np.ndarray:
    # eigenvectors of I - P_Q with eigenvalue 1
    vals, vecs = np.linalg.eigh(np.eye(PROBE_DIM) - q_projector())
    return vecs[:, vals > 0.5].T.conj()


@dataclass(frozen=True)
class ProtocolConfig:
    axis: HamiltonianAxis
    evolution_time: float
    gate: InteractionGate
    initial: np.ndarray = field(repr=False)
    outcome_filter: OutcomeFilter = field(default_factory=OutcomeFilter.all_q)
    mode: Mode | None = None

    def __post_init__(self):
        psi = np.array(self.initial, dtype=complex).ravel()
        if not math.isfinite(self.evolution_time):
            raise ConfigurationError("evolution time must be finite")
        if abs(np.vdot(psi, psi).real - 1.0) > 1e-12:
            raise ConfigurationError("initial state must be normalized")
        inferred = {2: Mode.SINGLE, 4: Mode.ENTANGLED}.get(psi.size)
        if inferred is None:
            raise ConfigurationError(f"initial state must have dim 2 or 4, got {psi.size}")
        mode = Mode(self.mode) if self.mode is not None else inferred
        if mode is not inferred:
            raise ConfigurationError(f"{mode.value} mode needs a dim-{2 if mode is Mode.SINGLE else 4} initial state")
        psi.setflags(write=False)
        object.__setattr__(self, "initial", psi)
        object.__setattr__(self, "mode", mode)

    @property
    def system_qubits(self) -> int:
        return 1 if self.mode is Mode.SINGLE else 2


@dataclass(frozen=True)
class OutcomeRecord:
    outcome_label: str
    probability: float
    post_state: np.ndarray | None = field(repr=False)
    reset_fidelity: float | None

    @property
    def defined(self) -> bool:
        return self.post_state is not None


def evolve(config: ProtocolConfig) -> np.ndarray:
    """Joint state after the last interaction, before any projection."""
    n_sys = config.system_qubits
    n = n_sys + N_PROBES
    target = n_sys - 1
    u0 = su2_exponential(config.axis, config.evolution_time)
    psi = tensor(config.initial, probe_initial_state())
    for k in range(N_PROBES):
        psi = apply_operator(psi, u0, [target], n)
        psi = apply_operator(psi, config.gate.matrix, [target, n_sys + k], n)
    return psi


def run_protocol(config: ProtocolConfig) -> list[OutcomeRecord]:
    """Outcome probabilities and post-selected system states, one per filter outcome."""
    n_sys = config.system_qubits
    amplitudes = evolve(config).reshape(2**n_sys, PROBE_DIM)
    reference = density_matrix(config.initial)
    records = []
    for label, rows in config.outcome_filter.projectors():
        branches = amplitudes @ rows.conj().T
        unnormalized = branches @ branches.conj().T
        probability = float(np.trace(unnormalized).real)
        if probability < PROBABILITY_FLOOR:
            records.append(OutcomeRecord(label, 0.0, None, None))
            continue
        post = unnormalized / probability
        records.append(OutcomeRecord(label, probability, post, overlap_fidelity(post, reference)))
    return records


def merge_outcomes(records: Sequence[OutcomeRecord], label: str, reference=None) -> OutcomeRecord:
    """Coarse-grain several outcomes into one accepted event.

    The merged post state is the probability-weighted mixture. ``reference``
    is the state the fidelity is measured against; it is required if any
    merged branch lacks a fidelity to reuse.
    """
    total = sum(r.probability for r in records)
    if total < PROBABILITY_FLOOR:
        return OutcomeRecord(label, 0.0, None, None)
    post = sum(r.probability * r.post_state for r in records if r.defined) / total
    if reference is not None:
        fidelity = overlap_fidelity(post, density_matrix(reference))
    else:
        fidelity = sum(r.probability * r.reset_fidelity for r in records if r.defined) / total
    return OutcomeRecord(label, total, post, fidelity)


def herald_filter(gate: InteractionGate) -> OutcomeFilter:
    """The experimentally heralded outcomes of each circuit."""
    if gate.label == "SWAP":
        return OutcomeFilter.double_bsm("PsiPlus", "PsiPlus")
    if gate.label == "PBS_CIRCUIT_II":
        return OutcomeFilter.probe_z("0000", "1111")
    return OutcomeFilter.all_q()


def heralded_outcome(config: ProtocolConfig) -> OutcomeRecord:
    """All accepted branches of ``config`` merged into one success event."""
    return merge_outcomes(run_protocol(config), "success", config.initial)


@dataclass(frozen=True)
class TrajectoryPoint:
    time: float
    bloch: tuple[float, float, float]
    fidelity: float


def trajectory(config: ProtocolConfig, time_grid: Sequence[float]) -> list[TrajectoryPoint]:
    """Free evolution of the target alone; the no-reset reference curve."""
    if config.mode is not Mode.SINGLE:
        raise ConfigurationError("trajectory needs a single-qubit target")
    rho0 = density_matrix(config.initial)
    points = []
    for t in time_grid:
        psi_t = su2_exponential(config.axis, float(t)) @ config.initial
        rho_t = density_matrix(psi_t)
        points.append(TrajectoryPoint(float(t), bloch_coords(rho_t), overlap_fidelity(rho_t, rho0)))
    return points


@dataclass(frozen=True)
class SweepSample:
    index: int
    seed: int
    total_success: float
    min_reset_fidelity: float


@dataclass(frozen=True)
class SweepReport:
    samples: list[SweepSample]
    fidelity_tolerance: float = 1e-9

    @property
    def successes(self) -> np.ndarray:
        return np.array([s.total_success for s in self.samples])

    @property
    def mean_success(self) -> float:
        return float(self.successes.mean())

    @property
    def max_success(self) -> float:
        return float(self.successes.max())

    @property
    def standard_error(self) -> float:
        x = self.successes
        return float(x.std(ddof=1) / math.sqrt(x.size)) if x.size > 1 else float("nan")

    @property
    def fidelity_failures(self) -> int:
        return sum(1 for s in self.samples if s.min_reset_fidelity < 1 - self.fidelity_tolerance)


def sample_seeds(seed: int, n_samples: int) -> list[int]:
    """Independent per-sample seeds derived from one master seed."""
    children = np.random.SeedSequence(seed).spawn(n_samples)
    return [int(c.generate_state(1, dtype=np.uint32)[0]) for c in children]


def haar_sweep(
    axis: HamiltonianAxis,
    T: float,
    n_samples: int,
    seed: int,
    initial=None,
) -> SweepReport:
    """Run the protocol with Haar-random interactions, accepting all of Q."""
    if n_samples < 1:
        raise ConfigurationError("n_samples must be >= 1")
    psi0 = named_state("D") if initial is None else initial
    samples = []
    for i, s in enumerate(sample_seeds(seed, n_samples)):
        gate = custom_gate(haar_unitary(4, s))
        records = run_protocol(ProtocolConfig(axis, T, gate, psi0, OutcomeFilter.all_q()))
        total = sum(r.probability for r in records)
        fids = [r.reset_fidelity for r in records if r.probability > 1e-9]
        samples.append(SweepSample(i, s, total, min(fids) if fids else float("nan")))
    return SweepReport(samples)
