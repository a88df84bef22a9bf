"""Bell expression representations, expansion and local bounds."""

import pytest

from ditomo.exactnum import Rad2
from ditomo.pi_bell import (DeterministicStrategy, GeneralBellExpression,
                            PIBellExpression, all_strategies, local_bound,
                            pi_multisets, strategy_classes, symmetrize,
                            symmetrized_components)

MERMIN = PIBellExpression(3, [0, 0, 0, 0, 0, 1, 0, -1, 0])
MABK4 = PIBellExpression(4, [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, -1, -1, 1])
TOTH = GeneralBellExpression(4, {
    (1, 0, 1, 2): 1, (1, 0, 2, 1): 1, (0, 2, 1, 2): 1, (0, 2, 2, 1): 1,
    (2, 1, 2, 2): 2, (2, 1, 1, 1): -2})


def test_pi_multiset_order():
    assert pi_multisets(3) == [(1,), (2,), (1, 1), (1, 2), (2, 2),
                               (1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 2, 2)]


def test_mermin_expansion():
    g = MERMIN.expand()
    assert g.coefficients == {
        (1, 1, 1): 1,
        (1, 2, 2): -1, (2, 1, 2): -1, (2, 2, 1): -1,
    }


def test_marginal_expansion():
    g = PIBellExpression(3, [1, 0, 0, 0, 0, 0, 0, 0, 0]).expand()
    assert g.coefficients == {(1, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1}


def test_mabk_expansion_16_terms():
    g = MABK4.expand()
    assert len(g.coefficients) == 1 + 4 + 6 + 4 + 1
    assert g.coefficients[(1, 1, 1, 1)] == 1
    assert g.coefficients[(1, 1, 1, 2)] == 1
    assert g.coefficients[(1, 1, 2, 2)] == -1
    assert g.coefficients[(1, 2, 2, 2)] == -1
    assert g.coefficients[(2, 2, 2, 2)] == 1


def test_symmetrize_round_trip(rng):
    for _ in range(20):
        coeffs = rng.integers(-3, 4, size=9).tolist()
        p = PIBellExpression(3, coeffs)
        assert symmetrize(p.expand()).coefficients == coeffs


def test_symmetrize_rejects_asymmetric():
    g = GeneralBellExpression(3, {(1, 0, 0): 1})
    with pytest.raises(ValueError):
        symmetrize(g)


def test_strategy_counts():
    assert len(list(all_strategies(3))) == 64
    assert len(strategy_classes(1)) == 4
    assert len(strategy_classes(3)) == 20
    assert len(strategy_classes(4)) == 35
    for n in (1, 2, 3, 4):
        assert sum(m for _s, m in strategy_classes(n)) == 4 ** n


def test_symmetrized_components_all_plus():
    s = DeterministicStrategy(((1, 1), (1, 1), (1, 1)))
    assert symmetrized_components(s) == [3, 3, 3, 6, 3, 1, 3, 3, 1]


def test_symmetrized_components_mixed():
    s = DeterministicStrategy(((1, -1), (1, -1), (1, -1)))
    assert symmetrized_components(s) == [3, -3, 3, -6, 3, 1, -3, 3, -1]


def test_component_nine_is_triple_second_setting(rng):
    for _ in range(10):
        outcomes = tuple(tuple(rng.choice([-1, 1], size=2)) for _ in range(3))
        s = DeterministicStrategy(outcomes)
        a2, b2, c2 = (pair[1] for pair in outcomes)
        assert symmetrized_components(s)[8] == a2 * b2 * c2


def test_components_match_expanded_evaluation(rng):
    """The 9 symmetrized sums against direct evaluation of the expansion."""
    for _ in range(25):
        coeffs = rng.normal(size=9).round(3).tolist()
        p = PIBellExpression(3, coeffs)
        g = p.expand()
        outcomes = tuple(tuple(rng.choice([-1, 1], size=2)) for _ in range(3))
        s = DeterministicStrategy(outcomes)
        e = symmetrized_components(s)
        assert g.evaluate(s) == pytest.approx(
            sum(b * ei for b, ei in zip(coeffs, e)), abs=1e-12)


def test_local_bounds_of_named_inequalities():
    assert local_bound(MERMIN.expand())[0] == 2
    assert local_bound(MABK4.expand())[0] == 4
    assert local_bound(TOTH)[0] == 4
    assert TOTH.algebraic_max() == 8


def test_local_bound_equals_class_maximum(rng):
    """Full enumeration against the 20 symmetrized classes."""
    for _ in range(100):
        coeffs = rng.normal(size=9).round(4).tolist()
        g = PIBellExpression(3, coeffs).expand()
        full, _ = local_bound(g)
        by_class = max(
            sum(b * e for b, e in zip(coeffs, symmetrized_components(rep)))
            for rep, _mult in strategy_classes(3))
        assert full == pytest.approx(by_class, abs=1e-10)


def test_local_bound_homogeneous(rng):
    coeffs = rng.normal(size=9).round(3).tolist()
    g = PIBellExpression(3, coeffs).expand()
    L, _ = local_bound(g)
    L3, _ = local_bound(g.scaled(3.0))
    assert L3 == pytest.approx(3.0 * L, abs=1e-9)


def test_local_bound_exact_arithmetic():
    # CHSH with coefficient sqrt(2): bound must come out exactly 2 sqrt(2)
    chsh = GeneralBellExpression(2, {
        (1, 1): Rad2(0, 1), (1, 2): Rad2(0, 1),
        (2, 1): Rad2(0, 1), (2, 2): Rad2(0, -1)})
    L, maximizers = local_bound(chsh)
    assert L == Rad2(0, 2)
    # b1 = b2 forces a1 = b1 (a2 free); b1 = -b2 forces a2 = b1 (a1 free)
    assert len(maximizers) == 8


def test_local_bound_reports_all_maximizers():
    g = GeneralBellExpression(1, {(1,): 1})
    L, maximizers = local_bound(g)
    assert L == 1
    assert len(maximizers) == 2  # the second setting is unconstrained
    assert maximizers[0].outcomes == ((1, 1),)


def test_expression_validation():
    with pytest.raises(ValueError):
        GeneralBellExpression(3, {(1, 1): 1})
    with pytest.raises(ValueError):
        GeneralBellExpression(3, {(1, 1, 3): 1})
    with pytest.raises(ValueError):
        PIBellExpression(3, [1, 2, 3])
    with pytest.raises(ValueError):
        DeterministicStrategy(((1, 0),))


def test_json_round_trip():
    g = TOTH
    assert GeneralBellExpression.loads(g.dumps()) == g
    p = PIBellExpression(3, [Rad2(0, 1), 0, 0, 0, 0, 1, 0, -1, 0])
    back = PIBellExpression.from_json(p.to_json())
    assert back.coefficients == p.coefficients
