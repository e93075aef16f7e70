"""Dense statevector register and the unitaries of the search iteration.

The register state is a plain complex amplitude vector indexed by the
computational basis label ``x`` in ``[0, 2**L)``.  Bit ``k`` of ``x``
(1-indexed, ``k = 1`` is the least significant bit) is the value of qubit
``k``, so a label reads ``x = x_L ... x_1`` in binary.

All operations are pure: the input state is never mutated, a new
:class:`StateVector` is returned.  Oracle applications are counted through
an explicit :class:`OracleLedger` so query costs stay auditable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .constants import MAX_QUBITS, NORM_ATOL


@dataclass(frozen=True)
class StateVector:
    """Pure state of an ``qubit_count``-qubit register.

    ``amplitudes[x]`` is the coefficient of basis state ``x``; the vector
    must be normalized to within :data:`~grover_ev.constants.NORM_ATOL`.
    """

    qubit_count: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        object.__setattr__(self, "amplitudes", amps)
        if self.qubit_count < 1:
            raise ValueError(f"qubit_count must be >= 1, got {self.qubit_count}")
        if amps.ndim != 1 or amps.shape[0] != 1 << self.qubit_count:
            raise ValueError(
                f"expected {1 << self.qubit_count} amplitudes for "
                f"{self.qubit_count} qubits, got shape {amps.shape}"
            )
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > NORM_ATOL:
            raise ValueError(f"state is not normalized: |psi|^2 = {norm_sq!r}")

    @property
    def dim(self) -> int:
        return 1 << self.qubit_count

    def probabilities(self) -> np.ndarray:
        """Born probabilities |amplitude|^2 for each basis label."""
        return np.abs(self.amplitudes) ** 2

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def to_pairs(self) -> list[list[float]]:
        """Debug-dump form: one [re, im] pair per basis label, x = 0..N-1."""
        return [[float(a.real), float(a.imag)] for a in self.amplitudes]

    def to_json(self) -> str:
        return json.dumps(self.to_pairs())


@dataclass(frozen=True)
class MarkedSet:
    """The set of marked database locations defining the search oracle.

    ``locations`` is stored as a strictly increasing tuple; membership is
    the oracle predicate (1 for marked, 0 otherwise).
    """

    locations: tuple[int, ...]
    universe_size: int

    def __post_init__(self):
        locs = tuple(sorted(int(x) for x in self.locations))
        object.__setattr__(self, "locations", locs)
        if not locs:
            raise ValueError("marked set must be nonempty")
        if len(set(locs)) != len(locs):
            raise ValueError(f"marked locations must be distinct: {locs}")
        if locs[0] < 0 or locs[-1] >= self.universe_size:
            raise ValueError(
                f"marked locations must lie in [0, {self.universe_size}): {locs}"
            )
        if len(locs) >= self.universe_size:
            raise ValueError("marked count must be smaller than the universe")

    @property
    def count(self) -> int:
        return len(self.locations)

    def __contains__(self, x: int) -> bool:
        return x in set(self.locations)

    def indicator(self) -> np.ndarray:
        """Boolean mask over basis labels, True on marked locations."""
        mask = np.zeros(self.universe_size, dtype=bool)
        mask[list(self.locations)] = True
        return mask


@dataclass
class OracleLedger:
    """Unit-cost query counter for oracle invocations within one run."""

    invocations: int = field(default=0)

    def charge(self, count: int = 1) -> None:
        if count < 1:
            raise ValueError(f"charge count must be >= 1, got {count}")
        self.invocations += count


def qubit_values(qubit_count: int, k: int) -> np.ndarray:
    """Value of qubit ``k`` (bit ``k`` of the label) for every basis label."""
    if not 1 <= k <= qubit_count:
        raise ValueError(f"qubit index {k} out of range 1..{qubit_count}")
    labels = np.arange(1 << qubit_count)
    return (labels >> (k - 1)) & 1


def new_uniform(qubit_count: int) -> StateVector:
    """Uniform superposition over all 2**L basis states."""
    if not 1 <= qubit_count <= MAX_QUBITS:
        raise ValueError(
            f"qubit_count must be in 1..{MAX_QUBITS}, got {qubit_count}"
        )
    n = 1 << qubit_count
    amps = np.full(n, 1.0 / math.sqrt(n), dtype=np.complex128)
    return StateVector(qubit_count, amps)


def apply_oracle(state: StateVector, marked: MarkedSet, ledger: OracleLedger) -> StateVector:
    """Flip the sign of every marked amplitude; one unit of query cost."""
    if marked.universe_size != state.dim:
        raise ValueError(
            f"marked set universe {marked.universe_size} does not match "
            f"state dimension {state.dim}"
        )
    amps = state.amplitudes.copy()
    amps[list(marked.locations)] *= -1.0
    ledger.charge()
    return StateVector(state.qubit_count, amps)


def apply_diffusion(state: StateVector) -> StateVector:
    """Inversion about the mean: each amplitude c -> -c + 2<c>."""
    mean = state.amplitudes.mean()
    return StateVector(state.qubit_count, 2.0 * mean - state.amplitudes)


def apply_grover(state: StateVector, marked: MarkedSet, ledger: OracleLedger) -> StateVector:
    """One amplification step: oracle followed by diffusion."""
    return apply_diffusion(apply_oracle(state, marked, ledger))


def grover_angle(universe_size: int, marked_count: int) -> float:
    """Rotation angle per amplification step, sin(theta/2) = sqrt(M/N).

    For a single marked item this satisfies cos(theta) = 1 - 2/N.
    """
    if marked_count < 1 or marked_count >= universe_size:
        raise ValueError(
            f"marked_count must satisfy 1 <= M < N, got M={marked_count}, N={universe_size}"
        )
    return 2.0 * math.asin(math.sqrt(marked_count / universe_size))


def closed_form_state(qubit_count: int, marked: MarkedSet, iterations: int) -> StateVector:
    """Analytic register state after ``iterations`` amplification steps.

    Every marked amplitude equals sin[(2m+1)theta/2]/sqrt(M) and every
    unmarked one cos[(2m+1)theta/2]/sqrt(N-M); ``iterations = 0`` gives the
    uniform state.
    """
    if iterations < 0:
        raise ValueError(f"iterations must be >= 0, got {iterations}")
    if not 1 <= qubit_count <= MAX_QUBITS:
        raise ValueError(
            f"qubit_count must be in 1..{MAX_QUBITS}, got {qubit_count}"
        )
    n = 1 << qubit_count
    if marked.universe_size != n:
        raise ValueError(
            f"marked set universe {marked.universe_size} does not match 2**{qubit_count}"
        )
    m_count = marked.count
    half_angle = (2 * iterations + 1) * grover_angle(n, m_count) / 2.0
    on_marked = math.sin(half_angle) / math.sqrt(m_count)
    off_marked = math.cos(half_angle) / math.sqrt(n - m_count)
    amps = np.full(n, off_marked, dtype=np.complex128)
    amps[list(marked.locations)] = on_marked
    return StateVector(qubit_count, amps)
