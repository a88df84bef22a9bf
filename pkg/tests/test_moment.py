"""Moment-matrix structure: word algebra, canonicalization, dense oracle."""

import math

import numpy as np
import pytest

from ditomo.moment import (OperatorWord,
                           build_sequence_set, build_structure, canonical_form,
                           embed_functional, moment_key, npa_upper_bound,
                           scenario_moment_matrix, structure_constraints)
from ditomo.pi_bell import GeneralBellExpression, PIBellExpression
from ditomo.qubit_algebra import (PAULI, PlanarObservable,
                                  observable_matrix, w_state)

MERMIN = PIBellExpression(3, [0, 0, 0, 0, 0, 1, 0, -1, 0]).expand()


def test_word_reduction():
    w = canonical_form([(0, 1), (0, 1), (0, 2)], 1)
    assert w.letters == ((2,),)
    w = canonical_form([(0, 1), (1, 2), (0, 1)], 2)
    assert w.letters == ((), (2,))
    w = canonical_form([(0, 1), (0, 2), (0, 2), (0, 1)], 1)
    assert w.is_identity()


def test_word_product_and_adjoint():
    a = OperatorWord(((1, 2),))
    b = OperatorWord(((2, 1),))
    # (A1 A2)(A2 A1) reduces fully to the identity
    assert (a * b).is_identity()
    assert a.adjoint() == b
    assert (a * a).letters == ((1, 2, 1, 2),)


def test_word_validation():
    with pytest.raises(ValueError):
        OperatorWord(((1, 1),))
    with pytest.raises(ValueError):
        OperatorWord(((3,),))
    with pytest.raises(ValueError):
        OperatorWord(((1,),)) * OperatorWord(((1,), (2,)))


def test_canonicalization_idempotent(rng):
    for _ in range(50):
        raw = [(int(rng.integers(0, 3)), int(rng.integers(1, 3)))
               for _ in range(int(rng.integers(0, 8)))]
        w = canonical_form(raw, 3)
        # re-tagging the reduced word and reducing again is a fixed point
        tagged = [(p, ell) for p, seq in enumerate(w.letters) for ell in seq]
        assert canonical_form(tagged, 3) == w


def test_moment_key_pairs_word_with_adjoint():
    w = OperatorWord(((1, 2), (), (2,)))
    assert moment_key(w) == moment_key(w.adjoint())
    assert moment_key(w) in (w, w.adjoint())


def test_level_sizes():
    assert len(build_sequence_set("local2")) == 125
    assert len(build_sequence_set("local2plus")) == 216
    assert len(build_sequence_set("local2_4party")) == 625
    with pytest.raises(ValueError):
        build_sequence_set("local9")


def test_single_party_structure_worked_example():
    """One party, words (1, A1, A2, A1A2, A2A1): every entry checked by hand."""
    words = [OperatorWord((p,)) for p in ((), (1,), (2,), (1, 2), (2, 1))]
    s = build_structure(words)
    assert s.size == 5
    # diagonal: all identity moments
    ident = moment_key(OperatorWord(((),)))
    for i in range(5):
        assert s.entry_words[(i, i)] == ident
    # (A1)^dag (A2) = A1 A2
    assert s.entry_words[(1, 2)] == moment_key(OperatorWord(((1, 2),)))
    # (A1 A2)^dag (A2 A1) = A2 A1 A2 A1 -> key of its adjoint class
    assert s.entry_words[(3, 4)] == moment_key(OperatorWord(((2, 1, 2, 1),)))
    # (A1)^dag (A1 A2) = A2, a degree-1 moment appearing off the first row
    assert s.entry_words[(1, 3)] == moment_key(OperatorWord(((2,),)))
    # distinct canonical moments for this set, counted by hand:
    # 1, A1, A2, A1A2(~A2A1), A1A2A1, A2A1A2, A1A2A1A2(~adj), A2A1A2A1A2...
    assert s.num_moments == len(s.index)
    assert s.K == (15 - s.num_moments) + 1


def test_structure_size_and_k_report(structure_125):
    assert structure_125.size == 125
    assert structure_125.K == 7875 - structure_125.num_moments + 1
    # soft sanity: thousands of ties, not a degenerate structure
    assert 7000 < structure_125.K < 7800


def test_duplicate_words_rejected():
    with pytest.raises(ValueError):
        build_structure([OperatorWord(((),))] * 2)


def _zx_observables(n):
    return [(PAULI["Z"], PAULI["X"])] * n


def test_oracle_gamma_identity_diagonal(structure_125):
    gamma = scenario_moment_matrix(w_state(), _zx_observables(3),
                                   structure_125.words)
    assert np.allclose(np.diag(gamma), 1.0, atol=1e-12)


def test_oracle_gamma_is_psd(structure_125):
    gamma = scenario_moment_matrix(w_state(), _zx_observables(3),
                                   structure_125.words)
    eigs = np.linalg.eigvalsh(gamma)
    assert eigs.min() > -1e-10


def test_oracle_gamma_respects_equality_classes(structure_125):
    gamma = scenario_moment_matrix(w_state(), _zx_observables(3),
                                   structure_125.words)
    for key, positions in structure_125.index.items():
        vals = [gamma[i, j] for i, j in positions]
        assert max(vals) - min(vals) < 1e-10, str(key)


def test_oracle_gamma_satisfies_structure_constraints(structure_125):
    gamma = scenario_moment_matrix(w_state(), _zx_observables(3),
                                   structure_125.words)
    constraints, _ = structure_constraints(structure_125)
    for entries, rhs in constraints:
        total = 0.0
        for i, j, v in entries:
            total += v * gamma[i, j] * (1.0 if i == j else 2.0)
        assert total == pytest.approx(rhs, abs=1e-10)


def test_functional_matches_dense_bell_value(structure_125):
    """embed_functional + oracle Gamma reproduces <psi|B|psi> exactly."""
    phi = 0.09275644 * math.pi
    m1 = observable_matrix(PlanarObservable(phi)).entries
    m2 = observable_matrix(PlanarObservable(phi - math.pi / 2)).entries
    obs = [(m1, m2)] * 3
    gamma = scenario_moment_matrix(w_state(), obs, structure_125.words)
    f = embed_functional(MERMIN, structure_125)
    from ditomo.qubit_algebra import (HermitianOperator, bell_operator,
                                      expectation)
    dense = expectation(w_state(), bell_operator(
        MERMIN, [(HermitianOperator(m1), HermitianOperator(m2))] * 3))
    assert f.evaluate(gamma, structure_125) == pytest.approx(dense, abs=1e-10)


def test_imaginary_moments_rejected():
    # <(XY)_1> = i <Z_1> = i/3 on the W state: genuinely imaginary
    words = [OperatorWord(((), (), ())), OperatorWord(((1, 2), (), ()))]
    obs = [(PAULI["X"], PAULI["Y"])] * 3
    with pytest.raises(ValueError):
        scenario_moment_matrix(w_state(), obs, words)


def test_embed_rejects_unrepresentable_word(structure_125):
    deep = OperatorWord(((1, 2, 1, 2, 1, 2, 1, 2, 1, 2),
                         (1, 2, 1, 2, 1, 2, 1, 2, 1, 2), ()))
    with pytest.raises(ValueError):
        embed_functional([(deep, 1.0)], structure_125)


def test_embed_bell_expression_coefficients(structure_125):
    f = embed_functional(MERMIN, structure_125)
    key = moment_key(OperatorWord(((1,), (1,), (1,))))
    assert f.coeffs[key] == 1.0
    key = moment_key(OperatorWord(((2,), (2,), (1,))))
    assert f.coeffs[key] == -1.0
    assert len(f.coeffs) == 4


def test_npa_bound_chsh():
    """Two parties: the bound of the standard four-term expression is 2 sqrt(2)."""
    chsh = GeneralBellExpression(2, {(1, 1): 1, (1, 2): 1, (2, 1): 1,
                                     (2, 2): -1})
    words = [OperatorWord(c) for c in
             [((), ()), ((1,), ()), ((2,), ()), ((), (1,)), ((), (2,))]]
    structure = build_structure(words)
    bound, res = npa_upper_bound(chsh, structure=structure, tol=1e-9)
    assert bound == pytest.approx(2 * math.sqrt(2), abs=1e-6)
    assert res.ok


def test_npa_bound_mermin(structure_125):
    bound, res = npa_upper_bound(MERMIN, structure=structure_125, tol=1e-8)
    assert bound == pytest.approx(4.0, abs=1e-5)
    assert res.status == "optimal"
    assert res.duality_gap < 1e-5
