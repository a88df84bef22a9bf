"""Dense qubit algebra: states, observables, Bell operators, eigenpairs."""

import math

import numpy as np
import pytest

from ditomo.pi_bell import GeneralBellExpression, PIBellExpression
from ditomo.qubit_algebra import (PAULI, HermitianOperator, PlanarObservable,
                                  QubitScenario, StateVector, basis_state,
                                  bell_operator, build_pauli_word,
                                  cluster_state, expectation, ghz_state,
                                  max_overlap_under_local_unitaries,
                                  observable_matrix, tensor, top_eigenpair,
                                  w_bar_state, w_state)

SQRT3 = math.sqrt(3.0)

# the nine symmetrized Z/X tensor operators and their known action on
# the W state, used as the dense-algebra oracle
SYM_OPERATORS = [
    [("Z", "I", "I"), ("I", "Z", "I"), ("I", "I", "Z")],
    [("X", "I", "I"), ("I", "X", "I"), ("I", "I", "X")],
    [("Z", "Z", "I"), ("Z", "I", "Z"), ("I", "Z", "Z")],
    [("Z", "X", "I"), ("X", "Z", "I"), ("Z", "I", "X"),
     ("X", "I", "Z"), ("I", "Z", "X"), ("I", "X", "Z")],
    [("X", "X", "I"), ("X", "I", "X"), ("I", "X", "X")],
    [("Z", "Z", "Z")],
    [("Z", "Z", "X"), ("Z", "X", "Z"), ("X", "Z", "Z")],
    [("Z", "X", "X"), ("X", "Z", "X"), ("X", "X", "Z")],
    [("X", "X", "X")],
]


def sym_operator(i: int) -> HermitianOperator:
    total = sum(build_pauli_word(letters).entries for letters in SYM_OPERATORS[i])
    return HermitianOperator(total)


def test_state_validation():
    with pytest.raises(ValueError):
        StateVector([1.0, 1.0])
    with pytest.raises(ValueError):
        StateVector([1.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        StateVector(np.ones(4) / 2.0, num_parties=3)


def test_reference_state_amplitudes():
    assert np.allclose(ghz_state(3).amplitudes[[0, 7]], 1 / math.sqrt(2))
    assert np.count_nonzero(ghz_state(3).amplitudes) == 2
    assert np.allclose(ghz_state(4).amplitudes[[0, 15]], 1 / math.sqrt(2))
    cl = cluster_state().amplitudes
    assert cl[0b0000] == cl[0b0011] == cl[0b1100] == 0.5
    assert cl[0b1111] == -0.5
    assert np.count_nonzero(cl) == 4
    w = w_state().amplitudes
    assert np.allclose(w[[0b001, 0b010, 0b100]], 1 / SQRT3)


def test_pauli_word_examples():
    zii = build_pauli_word(("Z", "I", "I"))
    assert np.allclose(np.diag(zii.entries), [1, 1, 1, 1, -1, -1, -1, -1])
    xxx = build_pauli_word(("X", "X", "X"))
    assert np.allclose(xxx.entries @ basis_state((0, 0, 0)).amplitudes,
                       basis_state((1, 1, 1)).amplitudes)
    with pytest.raises(ValueError):
        build_pauli_word(("Q",))
    with pytest.raises(ValueError):
        build_pauli_word(("Z",) * 5)


def test_symmetrized_operator_action_on_w():
    """All nine known actions on |W>, by dense matrix algebra to 1e-12."""
    w = w_state().amplitudes
    wb = w_bar_state().amplitudes
    k000 = basis_state((0, 0, 0)).amplitudes
    k111 = basis_state((1, 1, 1)).amplitudes
    expected = [
        w,
        2 * wb + SQRT3 * k000,
        -w,
        2 * SQRT3 * k000,
        2 * w + SQRT3 * k111,
        -w,
        -2 * wb + SQRT3 * k000,
        2 * w - SQRT3 * k111,
        wb,
    ]
    for i in range(9):
        got = sym_operator(i).entries @ w
        assert np.abs(got - expected[i]).max() < 1e-12, f"operator {i + 1}"


def test_expectations_on_w():
    w = w_state()
    assert expectation(w, sym_operator(0)) == pytest.approx(1.0, abs=1e-12)
    assert expectation(w, sym_operator(2)) == pytest.approx(-1.0, abs=1e-12)
    assert expectation(basis_state((0, 0, 0)),
                       build_pauli_word(("Z", "I", "I"))) == pytest.approx(1.0)


def test_observable_matrix():
    assert np.allclose(observable_matrix(PlanarObservable(0.0)).entries,
                       PAULI["Z"])
    assert np.allclose(observable_matrix(PlanarObservable(math.pi / 2)).entries,
                       PAULI["X"], atol=1e-15)
    assert np.allclose(observable_matrix(PlanarObservable(math.pi / 4)).entries,
                       (PAULI["Z"] + PAULI["X"]) / math.sqrt(2))


def test_observable_involutory(rng):
    for phi in rng.uniform(-10, 10, size=100):
        m = observable_matrix(PlanarObservable(phi)).entries
        assert np.abs(m @ m - np.eye(2)).max() < 1e-12


def test_bell_operator_mermin_on_ghz():
    mermin = PIBellExpression(3, [0, 0, 0, 0, 0, 1, 0, -1, 0]).expand()
    op = bell_operator(mermin, [(PAULI["X"], PAULI["Y"])] * 3)
    assert expectation(ghz_state(3), op) == pytest.approx(4.0, abs=1e-12)


def test_bell_operator_zero_and_linearity(rng):
    zero = bell_operator(GeneralBellExpression(3, {}), [(PAULI["Z"], PAULI["X"])] * 3)
    assert np.abs(zero.entries).max() == 0.0
    b1 = rng.normal(size=9).round(3).tolist()
    b2 = rng.normal(size=9).round(3).tolist()
    obs = [(PAULI["Z"], PAULI["X"])] * 3
    lhs = bell_operator(PIBellExpression(3, [x + y for x, y in zip(b1, b2)]).expand(), obs)
    rhs = bell_operator(PIBellExpression(3, b1).expand(), obs).entries \
        + bell_operator(PIBellExpression(3, b2).expand(), obs).entries
    assert np.abs(lhs.entries - rhs).max() < 1e-12


def test_top_eigenpair_residual(rng):
    m = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
    h = HermitianOperator((m + m.conj().T) / 2)
    val, vec = top_eigenpair(h)
    resid = np.linalg.norm(h.entries @ vec.amplitudes - val * vec.amplitudes)
    assert resid < 1e-10


def test_top_eigenpair_z():
    val, vec = top_eigenpair(HermitianOperator(PAULI["Z"]))
    assert val == pytest.approx(1.0)
    assert vec.fidelity(StateVector([1, 0])) == pytest.approx(1.0)


def test_mermin_top_eigenvector_is_ghz():
    mermin = PIBellExpression(3, [0, 0, 0, 0, 0, 1, 0, -1, 0]).expand()
    op = bell_operator(mermin, [(PAULI["X"], PAULI["Y"])] * 3)
    val, vec = top_eigenpair(op)
    assert val == pytest.approx(4.0, abs=1e-10)
    assert max_overlap_under_local_unitaries(vec, ghz_state(3)) > 1 - 1e-9


def test_hermiticity_enforced():
    with pytest.raises(ValueError):
        HermitianOperator([[0, 1], [0, 0]])


def test_overlap_and_fidelity():
    w, wb = w_state(), w_bar_state()
    assert w.overlap(wb) == pytest.approx(0.0, abs=1e-15)
    assert w.fidelity(w) == pytest.approx(1.0)


def test_local_unitary_overlap_invariance(rng):
    v = rng.normal(size=8) + 1j * rng.normal(size=8)
    psi = StateVector(v / np.linalg.norm(v))
    us = []
    for _ in range(3):
        q, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        us.append(q)
    rotated = StateVector(tensor(*us) @ psi.amplitudes)
    # alternating ascent has a slow linear tail on generic random states
    assert max_overlap_under_local_unitaries(psi, rotated) > 1 - 1e-6


def test_w_state_product_overlap_is_four_ninths():
    best = max_overlap_under_local_unitaries(w_state(), basis_state((0, 0, 0)))
    assert best == pytest.approx(4.0 / 9.0, abs=1e-9)


def test_qubit_scenario_bell_value():
    mermin = PIBellExpression(3, [0, 0, 0, 0, 0, 1, 0, -1, 0]).expand()
    sc = QubitScenario(ghz_state(3), [(PAULI["X"], PAULI["Y"])] * 3)
    assert sc.bell_value(mermin) == pytest.approx(4.0, abs=1e-12)
