"""Per-qubit sigma_z expectation values, exact and under finite sampling.

An expectation-value machine reads out one number per qubit: the ensemble
average of sigma_z(k).  ``shots = 0`` models an infinite ensemble (exact
EVs); ``shots = n > 0`` draws ``n`` basis-state samples from the Born
distribution and reports empirical means.  Every shot is one simulated
ensemble member, so a single shared sample set feeds all qubits of a run.

RNG streams are derived from the model seed and nothing else:

* shot labels come from ``numpy.random.default_rng(seed)`` via inverse-CDF
  lookup on the cumulative Born distribution;
* the additive readout noise on qubit ``k`` comes from
  ``default_rng((seed, k))``, truncated at three sigma so reported EVs stay
  within the documented bound |ev| <= 1 + 3*sigma.

Identical seeds therefore give identical records, and the standalone
per-qubit estimator agrees bit-for-bit with a full-register readout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .core import StateVector, qubit_values


@dataclass(frozen=True)
class EnsembleModel:
    """Finite-ensemble readout model: shot count, RNG seed, readout noise."""

    shots: int = 0
    seed: int = 0
    gaussian_noise_sigma: float = 0.0

    def __post_init__(self):
        if self.shots < 0:
            raise ValueError(f"shots must be >= 0, got {self.shots}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.gaussian_noise_sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.gaussian_noise_sigma}")

    def default_threshold(self) -> float:
        """Smallest EV magnitude whose sign is trusted under this model.

        Five standard errors of an n-shot mean when sampling, near zero for
        the exact model.
        """
        if self.shots > 0:
            return 5.0 / np.sqrt(self.shots)
        return 1e-9


@dataclass(frozen=True)
class CorrelationInfo:
    """Record of a conditional bit-flip inserted before readout."""

    target_qubit: int
    fixed_bits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "fixed_bits", tuple(int(b) for b in self.fixed_bits))
        if any(b not in (0, 1) for b in self.fixed_bits):
            raise ValueError(f"fixed_bits must be 0/1, got {self.fixed_bits}")
        if self.target_qubit != len(self.fixed_bits) + 1:
            raise ValueError(
                f"target qubit {self.target_qubit} does not extend "
                f"{len(self.fixed_bits)} fixed bits"
            )


@dataclass(frozen=True)
class RunRecord:
    """Readout of one algorithm run: per-qubit EVs plus cost metadata."""

    evs: tuple[float, ...]
    iterates_used: int
    oracle_invocations: int
    correlation_applied: CorrelationInfo | None = None
    noise_sigma: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "evs", tuple(float(e) for e in self.evs))
        bound = 1.0 + 3.0 * self.noise_sigma
        if any(abs(e) > bound + 1e-12 for e in self.evs):
            raise ValueError(f"EV outside [-{bound}, {bound}]: {self.evs}")
        if self.oracle_invocations != self.iterates_used:
            raise ValueError(
                f"oracle invocations ({self.oracle_invocations}) must equal "
                f"iterate count ({self.iterates_used}) for a single run"
            )

    def to_json_dict(self) -> dict:
        corr = None
        if self.correlation_applied is not None:
            corr = {
                "target_qubit": self.correlation_applied.target_qubit,
                "fixed_bits": list(self.correlation_applied.fixed_bits),
            }
        return {
            "evs": list(self.evs),
            "m": self.iterates_used,
            "oracle_invocations": self.oracle_invocations,
            "correlation": corr,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def exact_ev(state: StateVector, k: int) -> float:
    """Exact ensemble average of sigma_z(k): P(bit k = 0) - P(bit k = 1)."""
    bits = qubit_values(state.qubit_count, k)
    probs = state.probabilities()
    return float(np.sum(probs[bits == 0]) - np.sum(probs[bits == 1]))


def _shot_labels(state: StateVector, model: EnsembleModel) -> np.ndarray:
    """Draw ``shots`` basis labels by inverse-CDF over the Born weights."""
    rng = np.random.default_rng(model.seed)
    cdf = np.cumsum(state.probabilities())
    cdf /= cdf[-1]
    return np.searchsorted(cdf, rng.random(model.shots), side="right")


def _readout_noise(model: EnsembleModel, k: int) -> float:
    """Additive instrument noise for qubit k, truncated at three sigma."""
    sigma = model.gaussian_noise_sigma
    if sigma == 0.0:
        return 0.0
    draw = np.random.default_rng((model.seed, k)).normal(0.0, sigma)
    return float(np.clip(draw, -3.0 * sigma, 3.0 * sigma))


def sampled_ev(state: StateVector, k: int, model: EnsembleModel) -> float:
    """Estimate of sigma_z(k) under the given ensemble model."""
    if not 1 <= k <= state.qubit_count:
        raise ValueError(f"qubit index {k} out of range 1..{state.qubit_count}")
    if model.shots == 0:
        base = exact_ev(state, k)
    else:
        labels = _shot_labels(state, model)
        bits = (labels >> (k - 1)) & 1
        base = float(np.mean(1.0 - 2.0 * bits))
    return base + _readout_noise(model, k)


def decide_sign(ev: float, threshold: float) -> int | None:
    """Map an EV to a bit value: 0 above +threshold, 1 below -threshold.

    Returns None when |ev| falls in the dead zone and the sign cannot be
    trusted.
    """
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    if ev > threshold:
        return 0
    if ev < -threshold:
        return 1
    return None


def measure_all(
    state: StateVector,
    model: EnsembleModel,
    *,
    iterates_used: int,
    oracle_invocations: int,
    correlation: CorrelationInfo | None = None,
) -> RunRecord:
    """Read out every qubit of one run from a single shared sample set."""
    n_qubits = state.qubit_count
    if model.shots == 0:
        base = [exact_ev(state, k) for k in range(1, n_qubits + 1)]
    else:
        labels = _shot_labels(state, model)
        base = [
            float(np.mean(1.0 - 2.0 * ((labels >> (k - 1)) & 1)))
            for k in range(1, n_qubits + 1)
        ]
    evs = tuple(base[k - 1] + _readout_noise(model, k) for k in range(1, n_qubits + 1))
    return RunRecord(
        evs=evs,
        iterates_used=iterates_used,
        oracle_invocations=oracle_invocations,
        correlation_applied=correlation,
        noise_sigma=model.gaussian_noise_sigma,
    )


def sign_error_rate(
    state: StateVector,
    k: int,
    *,
    shots: int,
    sigma: float = 0.0,
    threshold: float = 0.0,
    trials: int = 200,
    seed: int = 0,
) -> float:
    """Fraction of seeded readout trials that misjudge the sign of qubit k.

    The reference answer is the sign of the exact EV; a trial errs when its
    decision (at the given threshold) differs from that reference, counting
    an undecided readout of a decidable qubit as an error.  Trial ``t`` uses
    seed ``seed + t``.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    truth = decide_sign(exact_ev(state, k), 0.0)
    errors = 0
    for t in range(trials):
        model = EnsembleModel(shots=shots, seed=seed + t, gaussian_noise_sigma=sigma)
        if decide_sign(sampled_ev(state, k, model), threshold) != truth:
            errors += 1
    return errors / trials
