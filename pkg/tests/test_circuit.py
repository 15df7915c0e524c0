import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qattractor.circuit import (
    H, MCPhase, MCX, X, Circuit, conditional_phase_shifter, inverse, lowered_gate_count,
    multi_phase_on_set,
)
from qattractor.errors import IndexOutOfRange
from qattractor.simulator import unitary

from matrices import circuit_matrix, random_circuit


def diag_with(n, j, phi):
    d = np.ones(1 << n, dtype=complex)
    d[j] = np.exp(1j * phi)
    return np.diag(d)


def test_gate_validation():
    with pytest.raises(IndexOutOfRange):
        Circuit(2, [X(2)])
    with pytest.raises(ValueError):
        Circuit(2, [MCX([(0, True)], 0)])


def test_inverse_examples():
    assert inverse(Circuit(1, [X(0)])).gates == (X(0),)
    assert inverse(Circuit(1, [MCPhase((), 0, 0.3)])).gates == (MCPhase((), 0, -0.3),)
    c = Circuit(2, [H(0), MCPhase([(0, False)], 1, 0.5), X(1)])
    assert inverse(c).gates == (X(1), MCPhase([(0, False)], 1, -0.5), H(0))


@pytest.mark.parametrize("seed", range(20))
def test_inverse_gives_identity(seed):
    c = random_circuit(np.random.default_rng(seed), 3, 15)
    m = unitary(c) @ unitary(inverse(c))
    assert np.max(np.abs(m - np.eye(8))) < 1e-12


def test_shifter_base_cases_literal():
    phi = 0.77
    e = np.exp(1j * phi)
    c0 = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, e, 0], [0, 0, 0, 1]])
    c1 = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, e]])
    assert np.max(np.abs(unitary(conditional_phase_shifter(2, 2, phi)) - c0)) <= 1e-12
    assert np.max(np.abs(unitary(conditional_phase_shifter(2, 3, phi)) - c1)) <= 1e-12


def test_shifter_one_qubit_pi():
    assert np.allclose(unitary(conditional_phase_shifter(1, 0, math.pi)), np.diag([-1, 1]), atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_shifter_all_indices(n):
    phi = 1.234
    for j in range(1 << n):
        c = conditional_phase_shifter(n, j, phi)
        assert np.max(np.abs(unitary(c) - diag_with(n, j, phi))) <= 1e-12
        zeros = n - bin(j).count("1")
        assert len(c) == 2 * zeros + 1
        assert np.allclose(circuit_matrix(c), diag_with(n, j, phi), atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_shifter_zero_phase_is_identity(n):
    for j in range(1 << n):
        assert np.allclose(unitary(conditional_phase_shifter(n, j, 0.0)), np.eye(1 << n), atol=1e-12)


def test_shifter_out_of_range():
    with pytest.raises(IndexOutOfRange):
        conditional_phase_shifter(2, 4, 1.0)


def test_multi_phase_edge_cases():
    assert len(multi_phase_on_set(3, [], 1.0)) == 0
    full = unitary(multi_phase_on_set(2, range(4), 0.4))
    assert np.allclose(full, np.exp(0.4j) * np.eye(4), atol=1e-12)


@given(st.sets(st.integers(0, 7)), st.floats(-math.pi, math.pi))
def test_multi_phase_diagonal(states, phi):
    m = unitary(multi_phase_on_set(3, states, phi))
    expect = np.diag([np.exp(1j * phi) if j in states else 1 for j in range(8)])
    assert np.max(np.abs(m - expect)) < 1e-12


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.just(n), st.sets(st.integers(0, (1 << n) - 1)), st.sets(st.integers(0, (1 << n) - 1)))))
def test_disjoint_shifters_commute(args):
    n, a, b = args
    b = b - a
    ca, cb = multi_phase_on_set(n, a, 0.3), multi_phase_on_set(n, b, -1.1)
    assert np.max(np.abs(unitary(ca + cb) - unitary(cb + ca))) < 1e-12


def test_lowered_count():
    c = Circuit(3, [MCX([(0, False), (1, True)], 2), X(0)])
    assert lowered_gate_count(c) == 4


def test_remap():
    c = Circuit(2, [MCX([(0, True)], 1)]).remap([3, 1], 4)
    assert c.gates == (MCX([(3, True)], 1),)


def test_dump_golden():
    c = Circuit(3, [X(0), H(2), MCX([(0, True), (1, False)], 2), MCPhase([(2, True)], 0, -math.pi / 2)])
    assert c.dump() == "\n".join([
        "X 0",
        "H 2",
        "MCX [+0,-1] 2",
        "MCP [+2] 0 -1.5707963267948966",
    ])
    assert conditional_phase_shifter(2, 1, 0.5).dump() == "X 1\nMCP [+0] 1 0.5\nX 1"
