"""Two-setting, binary-outcome Bell expressions and their local bounds.

A general expression assigns a real coefficient to every setting tuple
(x_1, ..., x_N) with x_i in {0, 1, 2}, where 0 means the party is absent
from the term.  Permutationally invariant (PI) expressions are stored by
multiset of settings and expand into the symmetric sum over placements.
Local bounds come from exhaustive enumeration of the 2^(2N) deterministic
strategies; coefficients may be floats or exact Q(sqrt(2)) values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product
from math import comb, factorial

from .exactnum import Rad2, coeff_from_json, coeff_to_json

SettingTuple = tuple  # (x_1, ..., x_N), x_i in {0, 1, 2}


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, Rad2))


@dataclass(frozen=True)
class DeterministicStrategy:
    """Per-party outcome assignments for settings 1 and 2 (setting 0 -> +1)."""

    outcomes: tuple  # ((A1, A2), (B1, B2), ...), entries in {-1, +1}

    def __post_init__(self):
        for pair in self.outcomes:
            if len(pair) != 2 or any(v not in (-1, 1) for v in pair):
                raise ValueError("outcomes must be pairs of +/-1")

    @property
    def num_parties(self) -> int:
        return len(self.outcomes)

    def outcome(self, party: int, setting: int) -> int:
        if setting == 0:
            return 1
        return self.outcomes[party][setting - 1]


def all_strategies(num_parties: int):
    """All 2^(2N) deterministic strategies, in lexicographic order (+1 first)."""
    pairs = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
    for combo in product(pairs, repeat=num_parties):
        yield DeterministicStrategy(combo)


class GeneralBellExpression:
    """Sparse correlator polynomial indexed by per-party setting tuples."""

    def __init__(self, num_parties: int, coefficients: dict | None = None):
        if num_parties < 1:
            raise ValueError("need at least one party")
        self.num_parties = num_parties
        self.coefficients = {}
        for settings, coeff in (coefficients or {}).items():
            settings = tuple(settings)
            if len(settings) != num_parties:
                raise ValueError(f"setting tuple {settings} has wrong length")
            if any(x not in (0, 1, 2) for x in settings):
                raise ValueError(f"invalid setting in {settings}")
            if coeff:
                self.coefficients[settings] = self.coefficients.get(settings, 0) + coeff

    def evaluate(self, strategy: DeterministicStrategy):
        if strategy.num_parties != self.num_parties:
            raise ValueError("party count mismatch")
        total = 0
        for settings, coeff in self.coefficients.items():
            sign = 1
            for party, x in enumerate(settings):
                sign *= strategy.outcome(party, x)
            total = total + coeff * sign
        return total

    def algebraic_max(self):
        """Sum of absolute coefficient values (trivial upper bound)."""
        total = 0
        for coeff in self.coefficients.values():
            total = total + abs(coeff)
        return total

    def scaled(self, factor) -> "GeneralBellExpression":
        return GeneralBellExpression(
            self.num_parties,
            {s: c * factor for s, c in self.coefficients.items()})

    def as_float(self) -> "GeneralBellExpression":
        return GeneralBellExpression(
            self.num_parties,
            {s: float(c) for s, c in self.coefficients.items()})

    def is_exact(self) -> bool:
        return all(_is_exact(c) for c in self.coefficients.values())

    def __eq__(self, other):
        return (isinstance(other, GeneralBellExpression)
                and self.num_parties == other.num_parties
                and self.coefficients == other.coefficients)

    def __repr__(self):
        return (f"GeneralBellExpression(N={self.num_parties}, "
                f"{len(self.coefficients)} terms)")

    # -- JSON wire format: {parties, terms: [{settings, coeff}]} --------------

    def to_json(self) -> dict:
        terms = [{"settings": list(s), "coeff": coeff_to_json(c)}
                 for s, c in sorted(self.coefficients.items())]
        return {"parties": self.num_parties, "terms": terms}

    @classmethod
    def from_json(cls, obj: dict) -> "GeneralBellExpression":
        coeffs = {tuple(t["settings"]): coeff_from_json(t["coeff"])
                  for t in obj["terms"]}
        return cls(obj["parties"], coeffs)

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def loads(cls, text: str) -> "GeneralBellExpression":
        return cls.from_json(json.loads(text))


def pi_multisets(num_parties: int):
    """Setting multisets indexing PI coefficients, in bracket order.

    For N=3 this is (1), (2); (1,1), (1,2), (2,2); (1,1,1), ..., (2,2,2),
    matching the coefficient order b_1 ... b_9.
    """
    out = []
    for size in range(1, num_parties + 1):
        out.extend(combinations_with_replacement((1, 2), size))
    return out


class PIBellExpression:
    """Permutationally invariant expression, stored by setting multiset."""

    def __init__(self, num_parties: int, coefficients):
        multisets = pi_multisets(num_parties)
        coefficients = list(coefficients)
        if len(coefficients) != len(multisets):
            raise ValueError(
                f"expected {len(multisets)} coefficients for N={num_parties}, "
                f"got {len(coefficients)}")
        self.num_parties = num_parties
        self.coefficients = coefficients

    def coefficient(self, multiset) -> object:
        return self.coefficients[pi_multisets(self.num_parties).index(tuple(multiset))]

    def expand(self) -> GeneralBellExpression:
        """Symmetric sum over all placements of each setting multiset."""
        coeffs = {}
        for multiset, coeff in zip(pi_multisets(self.num_parties), self.coefficients):
            if not coeff:
                continue
            padded = tuple(multiset) + (0,) * (self.num_parties - len(multiset))
            for placement in set(permutations(padded)):
                coeffs[placement] = coeffs.get(placement, 0) + coeff
        return GeneralBellExpression(self.num_parties, coeffs)

    def scaled(self, factor) -> "PIBellExpression":
        return PIBellExpression(self.num_parties,
                                [c * factor for c in self.coefficients])

    def as_float(self) -> "PIBellExpression":
        return PIBellExpression(self.num_parties,
                                [float(c) for c in self.coefficients])

    def __repr__(self):
        return f"PIBellExpression(N={self.num_parties}, {self.coefficients})"

    def to_json(self) -> dict:
        return {"parties": self.num_parties,
                "pi_coeffs": [coeff_to_json(c) for c in self.coefficients]}

    @classmethod
    def from_json(cls, obj: dict) -> "PIBellExpression":
        return cls(obj["parties"], [coeff_from_json(c) for c in obj["pi_coeffs"]])


def symmetrize(g: GeneralBellExpression) -> PIBellExpression:
    """Recover PI coefficients from a symmetric general expression.

    Inverse of :meth:`PIBellExpression.expand`; raises if ``g`` is not
    permutation symmetric.
    """
    n = g.num_parties
    coeffs = []
    seen = set()
    for multiset in pi_multisets(n):
        padded = tuple(multiset) + (0,) * (n - len(multiset))
        placements = set(permutations(padded))
        values = [g.coefficients.get(p, 0) for p in placements]
        if any(v != values[0] for v in values[1:]):
            raise ValueError(f"expression is not symmetric on {multiset}")
        coeffs.append(values[0])
        seen.update(placements)
    leftover = set(g.coefficients) - seen - {(0,) * n}
    if leftover or g.coefficients.get((0,) * n, 0):
        raise ValueError("expression has terms outside the PI layout")
    return PIBellExpression(n, coeffs)


def symmetrized_components(strategy: DeterministicStrategy):
    """The nine symmetrized strategy sums E_1 ... E_9 for three parties."""
    if strategy.num_parties != 3:
        raise ValueError("symmetrized components are defined for N=3")
    (a1, a2), (b1, b2), (c1, c2) = strategy.outcomes
    return [
        a1 + b1 + c1,
        a2 + b2 + c2,
        a1 * b1 + a1 * c1 + b1 * c1,
        a1 * b2 + a1 * c2 + b1 * c2 + a2 * b1 + a2 * c1 + b2 * c1,
        a2 * b2 + a2 * c2 + b2 * c2,
        a1 * b1 * c1,
        a1 * b1 * c2 + a1 * b2 * c1 + a2 * b1 * c1,
        a2 * b2 * c1 + a2 * b1 * c2 + a1 * b2 * c2,
        a2 * b2 * c2,
    ]


def local_bound(g: GeneralBellExpression):
    """Exact maximum over deterministic strategies, with all maximizers.

    Returns ``(L, maximizers)`` where ``maximizers`` lists every strategy
    attaining the bound, in lexicographic strategy order.  Arithmetic is
    exact whenever the coefficients are.
    """
    if g.num_parties > 4:
        raise ValueError("local_bound enumerates up to N=4 only")
    best = None
    argmax = []
    for strategy in all_strategies(g.num_parties):
        value = g.evaluate(strategy)
        if best is None or value > best:
            best = value
            argmax = [strategy]
        elif value == best:
            argmax.append(strategy)
    return best, argmax


def strategy_classes(num_parties: int):
    """Orbits of deterministic strategies under party permutation.

    Each class is a multiset of the four single-party strategy types; there
    are C(N+3, 3) of them.  Returns ``(representative, multiplicity)`` pairs
    with multiplicities summing to 2^(2N).
    """
    types = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
    classes = []
    for combo in combinations_with_replacement(range(4), num_parties):
        counts = [combo.count(t) for t in range(4)]
        mult = factorial(num_parties)
        for c in counts:
            mult //= factorial(c)
        rep = DeterministicStrategy(tuple(types[t] for t in combo))
        classes.append((rep, mult))
    assert len(classes) == comb(num_parties + 3, 3)
    return classes
