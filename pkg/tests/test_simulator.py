import json
import math

import numpy as np
import pytest

from qattractor.circuit import H, MCPhase, MCX, X, Circuit
from qattractor.errors import CapacityExceeded, IndexOutOfRange
from qattractor.simulator import (
    MeasurementHistogram, NoiseConfig, StateVector, apply_gate, noisy_distribution, run,
    run_noisy, sample, unitary,
)

from matrices import circuit_matrix, gate_matrix, random_circuit


def test_hadamard_and_cz():
    s = apply_gate(StateVector.basis(1, 0), H(0))
    assert np.allclose(s.dense, [1 / math.sqrt(2)] * 2)
    s = apply_gate(StateVector.basis(2, 3), MCPhase([(0, True)], 1, math.pi))
    assert np.allclose(s.dense, [0, 0, 0, -1])


def test_index_out_of_range():
    with pytest.raises(IndexOutOfRange):
        apply_gate(StateVector.basis(2, 0), X(5))


@pytest.mark.parametrize("sparse", [False, True])
@pytest.mark.parametrize("seed", range(15))
def test_matches_explicit_matrix(seed, sparse):
    rng = np.random.default_rng(seed)
    c = random_circuit(rng, 4, 25)
    psi = rng.normal(size=16) + 1j * rng.normal(size=16)
    psi /= np.linalg.norm(psi)
    init = StateVector.from_amplitudes(psi)
    if sparse:
        init = init.as_sparse()
    out = run(c, init, backend="sparse" if sparse else "dense").to_dense()
    assert np.max(np.abs(out - circuit_matrix(c) @ psi)) < 1e-12


@pytest.mark.parametrize("seed", range(10))
def test_norm_preserved_gate_by_gate(seed):
    rng = np.random.default_rng(seed)
    c = random_circuit(rng, 5, 40)
    for state in (StateVector.basis(5, 3), StateVector.basis(5, 3, sparse=True)):
        for g in c.gates:
            apply_gate(state, g)
            assert abs(state.norm() - 1) <= 1e-9


@pytest.mark.parametrize("seed", range(10))
def test_columns_orthonormal(seed):
    u = unitary(random_circuit(np.random.default_rng(seed), 3, 20))
    assert np.max(np.abs(u.conj().T @ u - np.eye(8))) < 1e-10


def test_gate_kernel_matches_definition():
    rng = np.random.default_rng(0)
    for _ in range(50):
        g = random_circuit(rng, 3, 1).gates[0]
        assert np.allclose(unitary(Circuit(3, [g])), gate_matrix(g, 3), atol=1e-14)


def test_run_basics():
    init = StateVector.basis(3, 5)
    assert np.allclose(run(Circuit(3), init).dense, init.dense)
    out = run(Circuit(3, [H(0), H(1), H(2)]), StateVector.basis(3, 0))
    assert np.allclose(out.dense, np.full(8, 1 / math.sqrt(8)))


def test_run_does_not_mutate_input():
    init = StateVector.basis(2, 0)
    run(Circuit(2, [X(0)]), init)
    assert init.dense[0] == 1


def test_auto_backend_and_capacity():
    wide = StateVector.basis(40, 0, sparse=True)
    out = run(Circuit(40, [X(39), H(0)]), wide)
    assert out.is_sparse and len(out.sparse) == 2
    with pytest.raises(CapacityExceeded):
        run(Circuit(40, [H(i) for i in range(12)]), wide, backend="sparse", max_support=1000)
    with pytest.raises(CapacityExceeded):
        run(Circuit(40), wide, backend="dense")


def test_sample_basis_state():
    state = StateVector.basis(4, 0b0110)
    hist = sample(state, [3, 2, 1, 0], 50, seed=1)
    assert hist.counts == {"0110": 50}
    # display order follows the qubit list
    assert sample(state, [0, 1, 2, 3], 5, seed=1).counts == {"0110": 5}
    assert sample(state, [1, 3], 5, seed=1).counts == {"10": 5}


def test_sample_uniform_within_binomial_tolerance():
    state = run(Circuit(2, [H(0), H(1)]), StateVector.basis(2, 0))
    hist = sample(state, [1, 0], 100_000, seed=11)
    assert sum(hist.counts.values()) == 100_000
    for k in ("00", "01", "10", "11"):
        assert abs(hist.counts[k] / 1e5 - 0.25) < 0.01


def test_sample_is_seeded():
    state = run(Circuit(3, [H(0), H(1), H(2)]), StateVector.basis(3, 0))
    assert sample(state, [0, 1, 2], 1000, 5) == sample(state, [0, 1, 2], 1000, 5)
    dense_hist = sample(state, [0, 1, 2], 1000, 5)
    assert sample(state.as_sparse(), [0, 1, 2], 1000, 5) == dense_hist


def test_histogram_serialisation():
    h = MeasurementHistogram(3, {"10": 1, "01": 2})
    assert json.loads(h.to_json()) == {"shots": 3, "counts": {"01": 2, "10": 1}}
    assert h.to_csv() == "bitstring,count\n01,2\n10,1\n"
    assert MeasurementHistogram.from_dict(h.to_dict()) == h
    assert h.mode() == "01"


def test_noise_config_validation():
    with pytest.raises(ValueError):
        NoiseConfig(0.6, 0.3, 0.2)
    with pytest.raises(ValueError):
        NoiseConfig(-0.1)


def test_zero_noise_equals_noiseless_sampling():
    c = Circuit(3, [H(0), MCX([(0, True)], 1), H(2)])
    init = StateVector.basis(3, 0)
    noisy = run_noisy(c, init, NoiseConfig(seed=4), 10, [0, 1, 2], 100)
    assert noisy == sample(run(c, init), [0, 1, 2], 1000, 4)


def test_forced_double_flip():
    c = Circuit(1, [X(0)])
    hist = run_noisy(c, StateVector.basis(1, 0), NoiseConfig(p_x=1.0, seed=3), 20, [0], 5)
    assert hist.counts == {"0": 100}


def test_pauli_y_and_z_errors():
    c = Circuit(1, [X(0)])
    assert run_noisy(c, StateVector.basis(1, 0), NoiseConfig(p_y=1.0), 3, [0], 2).counts == {"0": 6}
    assert run_noisy(c, StateVector.basis(1, 0), NoiseConfig(p_z=1.0), 3, [0], 2).counts == {"1": 6}


def test_noisy_runs_are_deterministic():
    c = Circuit(3, [H(0), MCX([(0, True)], 1), MCX([(1, True)], 2)])
    init = StateVector.basis(3, 0, sparse=True)
    noise = NoiseConfig.depolarizing(0.2, seed=9)
    a = run_noisy(c, init, noise, 30, [0, 1, 2], 7)
    b = run_noisy(c, init, noise, 30, [0, 1, 2], 7)
    assert a == b and a.shots == 210
    d = noisy_distribution(c, init, noise, 30, [0, 1, 2])
    assert abs(d.sum() - 1) < 1e-12


def test_marginal_dense_and_sparse_agree():
    rng = np.random.default_rng(2)
    c = random_circuit(rng, 5, 30)
    dense = run(c, StateVector.basis(5, 0), backend="dense")
    sparse = run(c, StateVector.basis(5, 0, sparse=True), backend="sparse")
    for qs in ([0], [4, 1], [2, 0, 3], [0, 1, 2, 3, 4]):
        assert np.allclose(dense.marginal(qs), sparse.marginal(qs), atol=1e-12)
