import numpy as np
import pytest

from qpow.circuit import build_ansatz
from qpow.hashing import encode_angles, sha3_256
from qpow.noise import (PRESET_IDEAL, PRESET_TRANSPILED_QUITO,
                        QUITO_MEASURED_MATCH_RATE, TRANSPILED_QUITO_CNOTS,
                        NoiseParams, accuracy_estimate, emulated_match_rate,
                        noisy_outcome, preset_cnots)
from qpow.simulator import most_probable_state, simulate


def sample_state(seed_text=b"noise state", n=4):
    return simulate(build_ansatz(encode_angles(sha3_256(seed_text)), n))


def test_accuracy_point_check_without_readout():
    acc = accuracy_estimate(4, 40, NoiseParams(e_cnot=0.01, e_readout=0.0))
    assert acc == pytest.approx(0.99 ** 40)
    assert acc == pytest.approx(0.669, abs=1e-3)


def test_accuracy_trivial_cases():
    assert accuracy_estimate(5, 0, NoiseParams(e_cnot=0.5, e_readout=0.0)) == 1.0
    assert accuracy_estimate(4, 12) == pytest.approx(0.99 ** 12 * 0.98 ** 4)


def test_accuracy_accepts_fractional_cnots():
    assert accuracy_estimate(4, 40.4) == pytest.approx(0.99 ** 40.4 * 0.98 ** 4)


def test_accuracy_monotonicity():
    base = accuracy_estimate(4, 40)
    assert accuracy_estimate(5, 40) < base
    assert accuracy_estimate(4, 41) < base
    assert accuracy_estimate(4, 40, NoiseParams(e_cnot=0.02)) < base
    assert accuracy_estimate(4, 40, NoiseParams(e_readout=0.03)) < base


def test_accuracy_validation():
    with pytest.raises(ValueError):
        accuracy_estimate(0, 10)
    with pytest.raises(ValueError):
        accuracy_estimate(4, -1)


def test_noise_params_validation():
    with pytest.raises(ValueError):
        NoiseParams(e_cnot=1.5)
    with pytest.raises(ValueError):
        NoiseParams(e_readout=-0.1)
    with pytest.raises(ValueError):
        NoiseParams(effective_cnots=-2)


def test_noiseless_outcome_is_exact():
    state = sample_state()
    params = NoiseParams(e_cnot=0.0, e_readout=0.0)
    exact = most_probable_state(state).bits
    for trial in range(5):
        assert noisy_outcome(state, params, 40, np.random.default_rng(trial)) == exact


def test_full_readout_error_complements():
    state = sample_state()
    params = NoiseParams(e_cnot=0.0, e_readout=1.0)
    exact = most_probable_state(state).bits
    flipped = noisy_outcome(state, params, 40)
    assert flipped == "".join("1" if b == "0" else "0" for b in exact)


def test_noisy_outcome_deterministic_under_seed():
    state = sample_state()
    params = NoiseParams(seed=123)
    runs = [noisy_outcome(state, params, 40.4) for _ in range(3)]
    assert runs[0] == runs[1] == runs[2]


def test_match_rate_tracks_survival_formula():
    # Spec'd operating point: ~0.617 expected, binomial tolerance 0.05.
    state = sample_state(b"match rate state")
    params = NoiseParams()
    rng = np.random.default_rng(11)
    exact = most_probable_state(state).bits
    trials = 1000
    hits = sum(noisy_outcome(state, params, 40, rng) == exact for _ in range(trials))
    assert hits / trials == pytest.approx(0.99 ** 40 * 0.98 ** 4, abs=0.05)


def test_preset_cnots():
    assert preset_cnots(4, PRESET_TRANSPILED_QUITO) == TRANSPILED_QUITO_CNOTS[4] == 40.4
    assert preset_cnots(4, PRESET_IDEAL) == 12.0
    with pytest.raises(ValueError):
        preset_cnots(6, PRESET_TRANSPILED_QUITO)
    with pytest.raises(ValueError):
        preset_cnots(4, "nonsense")


def test_emulated_match_rate_zero_errors():
    params = NoiseParams(e_cnot=0.0, e_readout=0.0, seed=1)
    assert emulated_match_rate(4, 50, PRESET_TRANSPILED_QUITO, params) == 1.0
    assert emulated_match_rate(4, 50, PRESET_IDEAL, params) == 1.0


def test_emulated_match_rate_near_model_and_device():
    rate = emulated_match_rate(4, 400, PRESET_TRANSPILED_QUITO, NoiseParams(seed=5))
    model = 0.99 ** 40.4 * 0.98 ** 4
    assert rate == pytest.approx(model, abs=0.08)
    # Device-measured coincidence for n=4 was 0.69; agreement is loose.
    assert abs(rate - QUITO_MEASURED_MATCH_RATE[4]) < 0.15


def test_emulated_match_rate_validation():
    with pytest.raises(ValueError):
        emulated_match_rate(4, 0)
