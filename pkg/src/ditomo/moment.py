"""Moment matrices for N-party, two-setting, binary-outcome scenarios.

An operator word is a product of per-party dichotomic observables A1, A2
(letters 1 and 2); different parties commute and each observable is a
Hermitian involution, so words reduce per party by cancelling adjacent
repeated letters.  Given an ordered word set S, the moment matrix
Gamma_{ij} = <S_i^dag S_j> of any quantum realization is positive
semidefinite, its diagonal is 1, and many entries coincide because they
canonicalize to the same word.  Maximizing a Bell functional over all
matrices with this structure gives a certified upper bound on the
quantum value (the NPA outer approximation at the level fixed by S).

All shipped states and observables are real in the computational basis,
so moments are real and Gamma is modeled as real symmetric, with each
word identified with its adjoint (per-party reversal).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .pi_bell import GeneralBellExpression
from .qubit_algebra import HermitianOperator, StateVector, tensor
from .solvers.sdp import SemidefiniteProgramInstance, solve_sdp


def _reduce_letters(letters):
    """Cancel adjacent equal letters (involutions): (1,1,2) -> (2,)."""
    out = []
    for ell in letters:
        if out and out[-1] == ell:
            out.pop()
        else:
            out.append(ell)
    return tuple(out)


@dataclass(frozen=True, order=True)
class OperatorWord:
    """Reduced word, stored as one letter tuple per party (parties commute)."""

    letters: tuple  # tuple of per-party tuples over {1, 2}

    def __post_init__(self):
        for party in self.letters:
            for a, b in zip(party, party[1:]):
                if a == b:
                    raise ValueError("word is not reduced")
            for ell in party:
                if ell not in (1, 2):
                    raise ValueError(f"invalid letter {ell!r}")

    @property
    def num_parties(self) -> int:
        return len(self.letters)

    @property
    def degree(self) -> int:
        return sum(len(p) for p in self.letters)

    def is_identity(self) -> bool:
        return self.degree == 0

    def adjoint(self) -> "OperatorWord":
        return OperatorWord(tuple(tuple(reversed(p)) for p in self.letters))

    def __mul__(self, other: "OperatorWord") -> "OperatorWord":
        if self.num_parties != other.num_parties:
            raise ValueError("party count mismatch")
        return OperatorWord(tuple(
            _reduce_letters(a + b) for a, b in zip(self.letters, other.letters)))

    def __str__(self):
        parts = []
        for p, seq in enumerate(self.letters):
            parts.extend(f"{chr(ord('A') + p)}{ell}" for ell in seq)
        return " ".join(parts) if parts else "1"


def canonical_form(tagged_letters, num_parties: int) -> OperatorWord:
    """Reduce a raw product of (party, setting) letters to an OperatorWord.

    Cross-party letters commute, so the word splits into per-party
    subsequences (order within a party preserved), each reduced by the
    involution rule.
    """
    per_party = [[] for _ in range(num_parties)]
    for party, setting in tagged_letters:
        if not 0 <= party < num_parties:
            raise ValueError(f"party index {party} out of range")
        per_party[party].append(setting)
    return OperatorWord(tuple(_reduce_letters(seq) for seq in per_party))


#: per-party word menus for the named levels, in graded-lex order
_LOCAL2 = ((), (1,), (2,), (1, 2), (2, 1))
_LOCAL2PLUS = _LOCAL2 + ((1, 2, 1),)

_LEVELS = {
    "local2": (_LOCAL2, 3),
    "local2plus": (_LOCAL2PLUS, 3),
    "local2_4party": (_LOCAL2, 4),
}


def build_sequence_set(level: str) -> list:
    """Ordered word set for a named level; party 1 varies slowest."""
    if level not in _LEVELS:
        raise ValueError(f"unknown level {level!r}; known: {sorted(_LEVELS)}")
    menu, n = _LEVELS[level]
    return [OperatorWord(combo) for combo in itertools.product(menu, repeat=n)]


def moment_key(w: OperatorWord) -> OperatorWord:
    """Canonical representative of the pair {w, w^dag} (real-moment model)."""
    return min(w, w.adjoint())


@dataclass
class MomentMatrixStructure:
    """Equality-class decomposition of the Gamma matrix over a word set."""

    words: list                  # ordered S
    index: dict                  # moment key -> list of (i, j), i <= j
    entry_words: dict            # (i, j), i <= j -> moment key
    K: int                       # equality + normalization constraint count

    @property
    def size(self) -> int:
        return len(self.words)

    @property
    def num_moments(self) -> int:
        return len(self.index)


def build_structure(words) -> MomentMatrixStructure:
    """Canonicalize every Gamma entry and group equal entries into classes.

    Entry (i, j) holds the moment of adjoint(S_i) * S_j.  K counts one
    constraint per redundant upper-triangle entry plus one for pinning
    the identity moment to 1.
    """
    seen = set(words)
    if len(seen) != len(words):
        raise ValueError("word set contains duplicates")
    n = len(words)
    index: dict = {}
    entry_words: dict = {}
    for i in range(n):
        wi_adj = words[i].adjoint()
        for j in range(i, n):
            key = moment_key(wi_adj * words[j])
            index.setdefault(key, []).append((i, j))
            entry_words[(i, j)] = key
    upper = n * (n + 1) // 2
    K = (upper - len(index)) + 1
    return MomentMatrixStructure(list(words), index, entry_words, K)


@dataclass
class MomentFunctional:
    """Linear functional over canonical moments: sum_k coeffs[k] * <k>."""

    coeffs: dict  # moment key -> float

    def evaluate(self, gamma: np.ndarray, structure: MomentMatrixStructure) -> float:
        total = 0.0
        for key, c in self.coeffs.items():
            i, j = structure.index[key][0]
            total += c * gamma[i, j]
        return total


def embed_functional(g, structure: MomentMatrixStructure) -> MomentFunctional:
    """Express a Bell expression (or word polynomial) over canonical moments.

    ``g`` is a GeneralBellExpression (settings 0 = identity) or an
    iterable of (OperatorWord, coefficient) pairs.  Every monomial must
    appear as some Gamma entry of the structure.
    """
    if isinstance(g, GeneralBellExpression):
        n = g.num_parties
        pairs = []
        for settings, coeff in g.coefficients.items():
            word = OperatorWord(tuple(
                (s,) if s else () for s in settings[:n]))
            pairs.append((word, float(coeff)))
    else:
        pairs = [(w, float(c)) for w, c in g]
    coeffs: dict = {}
    for word, coeff in pairs:
        key = moment_key(word)
        if key not in structure.index:
            raise ValueError(f"word '{word}' is not representable in this "
                             f"moment structure")
        coeffs[key] = coeffs.get(key, 0.0) + coeff
    return MomentFunctional(coeffs)


def _word_matrix(w: OperatorWord, observables) -> np.ndarray:
    """Dense matrix of a word under explicit per-party observables."""
    mats = []
    for party_letters, pair in zip(w.letters, observables):
        m = np.eye(2, dtype=complex)
        for ell in party_letters:
            obs = pair[ell - 1]
            if isinstance(obs, HermitianOperator):
                obs = obs.entries
            m = m @ np.asarray(obs, dtype=complex)
        mats.append(m)
    return tensor(*mats)


def scenario_moment_matrix(state: StateVector, observables, words,
                           imag_tol: float = 1e-10) -> np.ndarray:
    """Numeric Gamma of an explicit qubit scenario (the module's oracle).

    Entries are <psi| adjoint(S_i) S_j |psi> computed by dense algebra;
    with real states and X-Z-plane observables the result is real, and a
    residual imaginary part above ``imag_tol`` raises.
    """
    n = len(words)
    psi = state.amplitudes
    # <S_i^dag S_j> = (S_i psi)^dag (S_j psi): cache the applied vectors
    applied = [ _word_matrix(w, observables) @ psi for w in words ]
    gamma = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            val = np.vdot(applied[i], applied[j])
            if abs(val.imag) > imag_tol:
                raise ValueError(f"moment ({i},{j}) has imaginary part "
                                 f"{val.imag:g}; real-moment model invalid")
            gamma[i, j] = gamma[j, i] = val.real
    return gamma


def structure_constraints(structure: MomentMatrixStructure):
    """Sparse trace-equality constraints encoding the Gamma structure.

    Returns (constraints, entry_matrix) where ``constraints`` fixes the
    unit diagonal and ties every equality class together, and
    ``entry_matrix(key, coeff)`` gives the sparse symmetric matrix whose
    trace inner product with Gamma equals coeff * <key>.
    """
    def entry(pos, coeff):
        i, j = pos
        return (i, j, coeff if i == j else coeff / 2.0)

    constraints = []
    identity = moment_key(OperatorWord(((),) * structure.words[0].num_parties))
    for key, positions in structure.index.items():
        rep = positions[0]
        if key == identity:
            for pos in positions:
                constraints.append(([entry(pos, 1.0)], 1.0))
        else:
            for pos in positions[1:]:
                constraints.append(([entry(rep, 1.0), entry(pos, -1.0)], 0.0))

    def entry_matrix(functional: MomentFunctional):
        out = []
        for key, coeff in functional.coeffs.items():
            out.append(entry(structure.index[key][0], coeff))
        return out

    return constraints, entry_matrix


def npa_upper_bound(g, level: str = "local2", tol: float = 1e-6,
                    structure: MomentMatrixStructure | None = None,
                    **solver_kwargs):
    """Certified SDP upper bound on the quantum value of ``g``.

    Returns (bound, SDPResult).  Raises RuntimeError with the solver
    residuals when the solve fails outright.
    """
    if structure is None:
        structure = build_structure(build_sequence_set(level))
    functional = embed_functional(g, structure)
    constraints, entry_matrix = structure_constraints(structure)
    instance = SemidefiniteProgramInstance(
        dim=structure.size,
        objective=entry_matrix(functional),
        constraints=constraints,
        sense="max")
    result = solve_sdp(instance, tol=tol, **solver_kwargs)
    if not result.ok:
        raise RuntimeError(f"SDP solve failed: status={result.status}, "
                           f"iterations={result.iterations}")
    return result.optimum, result
