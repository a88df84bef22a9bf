"""Alternating-maximization heuristic for quantum Bell maxima."""

import math

import numpy as np
import pytest

from ditomo.catalog import b1, mermin, toth
from ditomo.moment import npa_upper_bound
from ditomo.pi_bell import GeneralBellExpression
from ditomo.seesaw import (SeesawConfig, _matrix_sign, _random_involution,
                           seesaw_optimize)

CHSH = GeneralBellExpression(2, {(1, 1): 1, (1, 2): 1, (2, 1): 1, (2, 2): -1})


def test_config_validation():
    with pytest.raises(ValueError):
        SeesawConfig(num_seeds=0)
    with pytest.raises(ValueError):
        SeesawConfig(max_iters=0)
    with pytest.raises(ValueError):
        SeesawConfig(convergence_tol=0.0)


def test_random_involution_properties(rng):
    for _ in range(20):
        m = _random_involution(rng)
        assert np.abs(m - m.conj().T).max() < 1e-12
        assert np.abs(m @ m - np.eye(2)).max() < 1e-12


def test_matrix_sign(rng):
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    h = (m + m.conj().T) / 2
    s = _matrix_sign(h)
    assert np.abs(s @ s - np.eye(2)).max() < 1e-12
    # sign(E) maximizes Tr(O E) over Hermitian involutions O
    vals = np.linalg.eigvalsh(h)
    assert np.real(np.trace(s @ h)) == pytest.approx(np.abs(vals).sum(),
                                                     abs=1e-12)


def test_chsh_maximum():
    value, scenario = seesaw_optimize(CHSH, SeesawConfig(num_seeds=10))
    assert value == pytest.approx(2 * math.sqrt(2), abs=1e-9)
    assert scenario.bell_value(CHSH) == pytest.approx(value, abs=1e-12)


def test_mermin_maximum():
    value, scenario = seesaw_optimize(mermin(), SeesawConfig(num_seeds=10))
    assert value == pytest.approx(4.0, abs=1e-9)
    # the returned observables are valid Hermitian involutions
    for pair in scenario.observables:
        for o in pair:
            m = o.entries
            assert np.abs(m @ m - np.eye(2)).max() < 1e-10
            assert np.abs(m - m.conj().T).max() < 1e-10


def test_w_inequality_maximum():
    value, _scenario = seesaw_optimize(b1(), SeesawConfig(num_seeds=20))
    assert value == pytest.approx(1.49177284, abs=1e-5)


@pytest.mark.heavy
def test_cluster_inequality_maximum():
    value, _scenario = seesaw_optimize(toth(), SeesawConfig(num_seeds=20))
    assert value == pytest.approx(8.0, abs=1e-6)


def test_deterministic_given_seed():
    cfg = SeesawConfig(num_seeds=5, rng_seed=7)
    v1, s1 = seesaw_optimize(CHSH, cfg)
    v2, s2 = seesaw_optimize(CHSH, cfg)
    assert v1 == v2
    assert np.array_equal(s1.state.amplitudes, s2.state.amplitudes)
    for p1, p2 in zip(s1.observables, s2.observables):
        for o1, o2 in zip(p1, p2):
            assert np.array_equal(o1.entries, o2.entries)


def test_lower_bounds_npa(rng):
    """On random expressions the heuristic never exceeds the moment-matrix
    upper bound (lower vs upper route agreement)."""
    for _ in range(3):
        coeffs = {s: round(float(c), 2)
                  for s, c in zip([(1, 1), (1, 2), (2, 1), (2, 2)],
                                  rng.normal(size=4))}
        g = GeneralBellExpression(2, coeffs)
        value, _ = seesaw_optimize(g, SeesawConfig(num_seeds=10))
        from ditomo.moment import OperatorWord, build_structure
        words = [OperatorWord(c) for c in
                 [((), ()), ((1,), ()), ((2,), ()), ((), (1,)), ((), (2,))]]
        bound, _res = npa_upper_bound(g, structure=build_structure(words),
                                      tol=1e-9)
        assert value <= bound + 1e-5


def test_party_count_limit():
    g = GeneralBellExpression(5, {(1, 1, 1, 1, 1): 1})
    with pytest.raises(ValueError):
        seesaw_optimize(g)
