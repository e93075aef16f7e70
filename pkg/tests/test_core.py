"""Statevector register, oracle/diffusion unitaries, and the closed form."""

import math

import numpy as np
import pytest
from conftest import grover_matrix, random_marked_locations

from grover_ev import (
    MarkedSet,
    OracleLedger,
    StateVector,
    apply_diffusion,
    apply_grover,
    apply_oracle,
    closed_form_state,
    grover_angle,
    m_standard,
    new_uniform,
    qubit_values,
)


# ---------------------------------------------------------------- StateVector

def test_uniform_one_qubit():
    state = new_uniform(1)
    assert np.allclose(state.amplitudes, [1 / math.sqrt(2)] * 2, atol=1e-15)


def test_uniform_two_qubits():
    state = new_uniform(2)
    assert np.allclose(state.amplitudes, [0.5] * 4, atol=1e-15)


def test_uniform_norm_ten_qubits():
    assert abs(new_uniform(10).norm_squared() - 1.0) <= 1e-12


@pytest.mark.parametrize("bad_l", [0, -1, 25])
def test_uniform_rejects_out_of_range(bad_l):
    with pytest.raises(ValueError):
        new_uniform(bad_l)


def test_statevector_rejects_wrong_length():
    with pytest.raises(ValueError):
        StateVector(2, np.ones(3) / math.sqrt(3))


def test_statevector_rejects_unnormalized():
    with pytest.raises(ValueError):
        StateVector(1, np.array([1.0, 1.0]))


def test_statevector_pairs_roundtrip():
    state = new_uniform(2)
    pairs = state.to_pairs()
    assert len(pairs) == 4
    rebuilt = np.array([complex(re, im) for re, im in pairs])
    assert np.array_equal(rebuilt, state.amplitudes)


def test_statevector_json_dump():
    import json

    amps = np.zeros(2, dtype=complex)
    amps[1] = 1j
    payload = json.loads(StateVector(1, amps).to_json())
    assert payload == [[0.0, 0.0], [0.0, 1.0]]


def test_qubit_values_bit_order():
    # label 5 = binary 101: qubit 1 set, qubit 2 clear, qubit 3 set
    assert qubit_values(3, 1)[5] == 1
    assert qubit_values(3, 2)[5] == 0
    assert qubit_values(3, 3)[5] == 1
    with pytest.raises(ValueError):
        qubit_values(3, 4)


# ------------------------------------------------------------------ MarkedSet

def test_marked_set_sorts_locations():
    marked = MarkedSet((5, 1, 3), 8)
    assert marked.locations == (1, 3, 5)
    assert marked.count == 3
    assert 5 in marked and 2 not in marked


@pytest.mark.parametrize(
    "locations,n",
    [((), 4), ((1, 1), 4), ((4,), 4), ((-1,), 4), ((0, 1, 2, 3), 4)],
)
def test_marked_set_rejects_invalid(locations, n):
    with pytest.raises(ValueError):
        MarkedSet(locations, n)


# --------------------------------------------------------------------- oracle

def test_oracle_flips_marked_amplitude():
    ledger = OracleLedger()
    state = apply_oracle(new_uniform(1), MarkedSet((1,), 2), ledger)
    root_half = 1 / math.sqrt(2)
    assert np.allclose(state.amplitudes, [root_half, -root_half], atol=1e-15)
    assert ledger.invocations == 1


@pytest.mark.parametrize("label", [0, 3, 5])
def test_oracle_negates_marked_basis_state(label):
    amps = np.zeros(8, dtype=complex)
    amps[label] = 1.0
    state = StateVector(3, amps)
    flipped = apply_oracle(state, MarkedSet((label,), 8), OracleLedger())
    assert np.allclose(flipped.amplitudes, -amps, atol=1e-15)


def test_oracle_rejects_size_mismatch():
    with pytest.raises(ValueError):
        apply_oracle(new_uniform(2), MarkedSet((1,), 8), OracleLedger())


def test_oracle_is_involution():
    rng = np.random.default_rng(7)
    amps = rng.normal(size=8) + 1j * rng.normal(size=8)
    amps /= np.linalg.norm(amps)
    state = StateVector(3, amps)
    marked = MarkedSet((2, 6), 8)
    ledger = OracleLedger()
    twice = apply_oracle(apply_oracle(state, marked, ledger), marked, ledger)
    assert np.max(np.abs(twice.amplitudes - state.amplitudes)) <= 1e-12
    assert ledger.invocations == 2


def test_ledger_charge_validates():
    ledger = OracleLedger()
    ledger.charge(3)
    assert ledger.invocations == 3
    with pytest.raises(ValueError):
        ledger.charge(0)


# ------------------------------------------------------------------ diffusion

def test_diffusion_on_basis_state():
    # mean amplitude is 1/4, so c -> -c + 1/2 at the occupied label
    amps = np.zeros(4, dtype=complex)
    amps[0] = 1.0
    state = apply_diffusion(StateVector(2, amps))
    assert np.allclose(state.amplitudes, [-0.5, 0.5, 0.5, 0.5], atol=1e-15)


def test_diffusion_fixes_uniform_state():
    state = new_uniform(3)
    assert np.allclose(apply_diffusion(state).amplitudes, state.amplitudes, atol=1e-15)


def test_diffusion_is_involution():
    rng = np.random.default_rng(11)
    amps = rng.normal(size=16) + 1j * rng.normal(size=16)
    amps /= np.linalg.norm(amps)
    state = StateVector(4, amps)
    twice = apply_diffusion(apply_diffusion(state))
    assert np.max(np.abs(twice.amplitudes - state.amplitudes)) <= 1e-12


def test_diffusion_matrix_squares_to_identity():
    from conftest import diffusion_matrix

    mat = diffusion_matrix(3)
    assert np.allclose(mat @ mat, np.eye(8), atol=1e-13)


# -------------------------------------------------------------- grover iterate

def test_single_iterate_four_items():
    ledger = OracleLedger()
    state = apply_grover(new_uniform(2), MarkedSet((3,), 4), ledger)
    assert np.max(np.abs(state.amplitudes - np.array([0, 0, 0, 1.0]))) <= 1e-12
    assert ledger.invocations == 1


def test_single_iterate_matches_closed_form():
    marked = MarkedSet((5,), 16)
    iterated = apply_grover(new_uniform(4), marked, OracleLedger())
    analytic = closed_form_state(4, marked, 1)
    assert np.max(np.abs(iterated.amplitudes - analytic.amplitudes)) <= 1e-12


def test_iterate_matches_explicit_matrix():
    marked = MarkedSet((2, 7), 8)
    mat = grover_matrix(3, marked.locations)
    state = new_uniform(3)
    expected = state.amplitudes.copy()
    for _ in range(3):
        expected = mat @ expected
        state = apply_grover(state, marked, OracleLedger())
    assert np.max(np.abs(state.amplitudes - expected)) <= 1e-12


def test_ledger_counts_iterates():
    ledger = OracleLedger()
    state = new_uniform(3)
    marked = MarkedSet((6,), 8)
    for _ in range(5):
        state = apply_grover(state, marked, ledger)
    assert ledger.invocations == 5


def test_norm_preserved_along_random_sequences():
    rng = np.random.default_rng(23)
    for _ in range(20):
        qubits = int(rng.integers(2, 7))
        marked = MarkedSet(random_marked_locations(rng, 1 << qubits, 2), 1 << qubits)
        state = new_uniform(qubits)
        ledger = OracleLedger()
        for _ in range(int(rng.integers(1, 30))):
            op = rng.integers(0, 3)
            if op == 0:
                state = apply_oracle(state, marked, ledger)
            elif op == 1:
                state = apply_diffusion(state)
            else:
                state = apply_grover(state, marked, ledger)
        assert abs(state.norm_squared() - 1.0) <= 1e-9


# ---------------------------------------------------------------------- angle

def test_angle_four_items():
    assert grover_angle(4, 1) == pytest.approx(math.pi / 3, abs=1e-12)


def test_angle_half_marked():
    assert grover_angle(4, 2) == pytest.approx(math.pi / 2, abs=1e-12)


def test_angle_sixteen_items():
    assert grover_angle(16, 1) == pytest.approx(0.5053605102841573, abs=1e-12)


@pytest.mark.parametrize("n", [4, 8, 64, 1024, 2**20])
def test_angle_single_item_identity(n):
    assert math.cos(grover_angle(n, 1)) == pytest.approx(1 - 2 / n, abs=1e-12)


@pytest.mark.parametrize("n,m", [(4, 0), (4, 4), (4, 5), (8, -1)])
def test_angle_rejects_bad_counts(n, m):
    with pytest.raises(ValueError):
        grover_angle(n, m)


# ---------------------------------------------------------------- closed form

def test_closed_form_zero_iterations_is_uniform():
    for qubits, locations in [(2, (1,)), (3, (0, 5)), (4, (2, 9, 11))]:
        state = closed_form_state(qubits, MarkedSet(locations, 1 << qubits), 0)
        assert np.max(np.abs(state.amplitudes - new_uniform(qubits).amplitudes)) <= 1e-12


def test_closed_form_peak_at_four_items():
    state = closed_form_state(2, MarkedSet((3,), 4), 1)
    assert np.max(np.abs(state.amplitudes - np.array([0, 0, 0, 1.0]))) <= 1e-12


def test_closed_form_rejects_negative_iterations():
    with pytest.raises(ValueError):
        closed_form_state(2, MarkedSet((3,), 4), -1)


def test_closed_form_matches_iteration_everywhere():
    # Brute-force operator application is the reference for every iterate
    # count up to the standard stopping point.
    rng = np.random.default_rng(2024)
    for qubits in range(2, 11):
        n = 1 << qubits
        for marked_count in (1, 2, 3):
            for _ in range(200):
                marked = MarkedSet(random_marked_locations(rng, n, marked_count), n)
                state = new_uniform(qubits)
                ledger = OracleLedger()
                for m in range(1, m_standard(n, marked_count) + 1):
                    state = apply_grover(state, marked, ledger)
                    analytic = closed_form_state(qubits, marked, m)
                    assert np.max(np.abs(state.amplitudes - analytic.amplitudes)) <= 1e-10


def test_two_amplitude_symmetry():
    # Marked amplitudes stay equal to each other at every step, as do all
    # unmarked ones.
    rng = np.random.default_rng(5)
    for qubits in (3, 5, 8):
        n = 1 << qubits
        marked = MarkedSet(random_marked_locations(rng, n, 3), n)
        mask = marked.indicator()
        state = new_uniform(qubits)
        ledger = OracleLedger()
        for _ in range(m_standard(n, 3)):
            state = apply_grover(state, marked, ledger)
            on_values = state.amplitudes[mask]
            off_values = state.amplitudes[~mask]
            assert np.max(np.abs(on_values - on_values[0])) <= 1e-12
            assert np.max(np.abs(off_values - off_values[0])) <= 1e-12
