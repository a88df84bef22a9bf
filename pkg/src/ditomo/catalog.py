"""Built-in Bell inequalities and self-testing targets.

Shipped inequalities (exact coefficients wherever the closed form lives
in Q(sqrt(2))):

==========  ==  =================  ==========================
name        N   local bound        quantum maximum
==========  ==  =================  ==========================
mermin      3   2                  4
mabk4       4   4                  8 sqrt(2)
toth        4   4                  8 (algebraic)
B1          3   1                  1.49177284  (angle 0.09275644 pi)
B2          3   872 - 48 sqrt(2)   964         (angle pi/4)
B3          3   6                  7           (angle pi/4, no marginals)
==========  ==  =================  ==========================

B1, B2, B3 are regenerated from the synthesis LP on first use (exactly,
for B2/B3).  Self-testing targets pair an inequality with the reference
state written in the Z/X measurement frame -- the top eigenvector of
the Bell operator at observables (Z, X) -- plus the fidelity baseline
reachable by an uncharacterized product-state box (a local-unitary
invariant of the reference state).
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .exactnum import Rad2
from .inequality_synth import OPTIMAL_PHI, synthesize
from .pi_bell import GeneralBellExpression, PIBellExpression
from .qubit_algebra import (PAULI, StateVector, bell_operator, top_eigenpair)
from .swap_fidelity import SwapTarget

B1_ANGLE = OPTIMAL_PHI
B1_QUANTUM_MAX = 1.49177284


def mermin() -> GeneralBellExpression:
    """Three-party Mermin expression, local bound 2, quantum maximum 4."""
    return PIBellExpression(3, [0, 0, 0, 0, 0, 1, 0, -1, 0]).expand()


def mabk4() -> GeneralBellExpression:
    """Four-party MABK expression, local bound 4, quantum maximum 8 sqrt(2)."""
    return PIBellExpression(
        4, [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, -1, -1, 1]).expand()


def toth() -> GeneralBellExpression:
    """Four-party cluster inequality, local bound 4, algebraic maximum 8.

    Not permutationally invariant; parties are ordered A, B, C, D.
    """
    return GeneralBellExpression(4, {
        (1, 0, 1, 2): 1, (1, 0, 2, 1): 1,
        (0, 2, 1, 2): 1, (0, 2, 2, 1): 1,
        (2, 1, 2, 2): 2, (2, 1, 1, 1): -2,
    })


@lru_cache(maxsize=None)
def b1() -> GeneralBellExpression:
    """Synthesized W-state inequality at the optimal angle, local bound 1."""
    return synthesize(B1_ANGLE, verify=False).b.as_float().expand()


@lru_cache(maxsize=None)
def b2() -> GeneralBellExpression:
    """Synthesized W-state inequality at pi/4, rescaled to integer-like
    coefficients with exact local bound 872 - 48 sqrt(2) and quantum
    value 964."""
    result = synthesize(math.pi / 4, exact=True, verify=False)
    scale = Rad2(872, -48)  # 872 - 48 sqrt(2)
    return result.b.scaled(scale).expand()


@lru_cache(maxsize=None)
def b3() -> GeneralBellExpression:
    """Marginal-free W-state inequality at pi/4 with exact local bound 6
    and quantum value 7."""
    result = synthesize(math.pi / 4, no_marginals=True, exact=True,
                        verify=False)
    return result.b.scaled(Rad2(6)).expand()


INEQUALITIES = {
    "mermin": mermin,
    "mabk4": mabk4,
    "toth": toth,
    "B1": b1,
    "B2": b2,
    "B3": b3,
}


def get_inequality(name: str) -> GeneralBellExpression:
    if name not in INEQUALITIES:
        raise KeyError(f"unknown inequality {name!r}; built-ins: "
                       f"{', '.join(sorted(INEQUALITIES))}")
    return INEQUALITIES[name]()


def _real_top_eigenvector(g: GeneralBellExpression) -> StateVector:
    """Top eigenvector of the Bell operator at observables (Z, X), made real.

    This is the state the swap circuit writes out at maximal violation,
    hence the natural reference for self-testing in the Z/X frame.
    """
    op = bell_operator(g, [(PAULI["Z"], PAULI["X"])] * g.num_parties)
    _val, vec = top_eigenpair(op)
    amps = vec.amplitudes
    k = int(np.argmax(np.abs(amps)))
    amps = amps / amps[k] * abs(amps[k])
    if np.abs(amps.imag).max() > 1e-10:
        raise ValueError("top eigenvector is not real up to a phase")
    real = amps.real
    return StateVector(real / np.linalg.norm(real))


def _swap_settings(g: GeneralBellExpression) -> GeneralBellExpression:
    """Relabel settings 1 <-> 2 at every party (an equivalent inequality)."""
    return GeneralBellExpression(
        g.num_parties,
        {tuple((3 - s) if s else 0 for s in settings): c
         for settings, c in g.coefficients.items()})


@lru_cache(maxsize=None)
def get_target(name: str, w_inequality: str = "B1") -> SwapTarget:
    """Self-testing target by name: W, GHZ3, GHZ4 or CL.

    The W target accepts ``w_inequality`` in {B1, B2, B3} to pick which
    synthesized inequality drives the curve.  The GHZ3 target uses the
    Mermin expression with its two settings relabeled: the swap circuit
    treats the settings asymmetrically (Z role vs X role) and the
    relabeled gauge yields the more informative fidelity curve.
    """
    if name == "W":
        cases = {
            "B1": (b1, 1.0, B1_QUANTUM_MAX, B1_ANGLE),
            "B2": (lambda: b2().as_float(), float(Rad2(872, -48)), 964.0,
                   math.pi / 4),
            "B3": (lambda: b3().as_float(), 6.0, 7.0, math.pi / 4),
        }
        if w_inequality not in cases:
            raise KeyError(f"W target supports inequalities "
                           f"{sorted(cases)}, got {w_inequality!r}")
        maker, lb, qmax, angle = cases[w_inequality]
        g = maker()
        return SwapTarget("W", _real_top_eigenvector(g), g,
                          baseline=4.0 / 9.0, rotation_angle=angle,
                          local_bound_value=lb, quantum_max=qmax)
    if name == "GHZ3":
        g = _swap_settings(mermin())
        return SwapTarget("GHZ3", _real_top_eigenvector(g), g,
                          baseline=0.5, local_bound_value=2.0,
                          quantum_max=4.0)
    if name == "GHZ4":
        g = mabk4()
        return SwapTarget("GHZ4", _real_top_eigenvector(g), g,
                          baseline=0.5, local_bound_value=4.0,
                          quantum_max=8.0 * math.sqrt(2.0))
    if name == "CL":
        g = toth()
        return SwapTarget("CL", _real_top_eigenvector(g), g,
                          baseline=0.25, local_bound_value=4.0,
                          quantum_max=8.0)
    raise KeyError(f"unknown target {name!r}; built-ins: W, GHZ3, GHZ4, CL")


TARGET_NAMES = ("W", "GHZ3", "GHZ4", "CL")
HEAVY_TARGETS = ("GHZ4", "CL")
