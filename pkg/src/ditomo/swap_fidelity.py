"""Device-independent fidelity lower bounds via the local swap isometry.

Each party appends a trusted ancilla in |0> and runs a two-gate swap
circuit built from its own (untrusted) measurement operators, with A1 in
the Z role and A2 in the X role.  Because the ancilla starts in |0>, the
usual three-gate swap loses its first gate, leaving the Kraus operators

    K_0 = (1 + A1) / 2,        K_1 = A2 (1 - A1) / 2,

which write ancilla bit 0 or 1 respectively.  The fidelity of the
swapped-out ancilla state with a reference |psi_bar> is then a linear
functional of moments of per-party words of length <= 3, all of which
are representable in the level-"local2" moment matrix.  Minimizing this
functional over all moment matrices compatible with a given Bell value
Q yields a certified lower bound f(Q) on the fidelity of any state
producing that violation.

Reference states live in the Z/X frame: for an inequality synthesized at
measurement angle phi, the self-tested state is the original reference
conjugated per party by the plane reflection returned by
:func:`rotation_for_angle`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .moment import (MomentFunctional, MomentMatrixStructure, OperatorWord,
                     build_sequence_set, build_structure, embed_functional,
                     moment_key, structure_constraints)
from .pi_bell import GeneralBellExpression
from .qubit_algebra import PAULI, HermitianOperator, StateVector, tensor
from .solvers.sdp import SemidefiniteProgramInstance, solve_sdp


def rotation_for_angle(phi: float) -> np.ndarray:
    """Single-qubit map sending the planar pair (M(phi), M(phi - pi/2)) to (Z, X).

    M(a) = cos(a) Z + sin(a) X.  The pair (M(phi), M(phi - pi/2)) has the
    opposite plane orientation to (Z, X), so no rotation about Y can align
    both members at once; the unique aligning conjugation is the
    reflection V = M(phi/2), a Hermitian involution:

        V M(phi) V = Z,        V M(phi - pi/2) V = X.
    """
    c, s = math.cos(phi / 2.0), math.sin(phi / 2.0)
    return c * PAULI["Z"] + s * PAULI["X"]


def rotate_state(state: StateVector, phi: float) -> StateVector:
    """Apply the per-party frame change of :func:`rotation_for_angle`."""
    v = rotation_for_angle(phi)
    full = tensor(*[v] * state.num_parties)
    return StateVector(full @ state.amplitudes)


@dataclass
class SwapTarget:
    """A reference state to self-test together with its Bell inequality.

    ``reference_state`` is expressed in the Z/X frame (i.e. already
    rotated if the inequality was synthesized at a nonzero angle, which
    ``rotation_angle`` records).  ``baseline`` is the fidelity reachable
    by a trivial product-state box, below which the bound is
    uninformative.
    """

    name: str
    reference_state: StateVector
    inequality: GeneralBellExpression
    baseline: float
    rotation_angle: float | None = None
    local_bound_value: float = 0.0
    quantum_max: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.baseline <= 1.0:
            raise ValueError("baseline must be a fidelity in [0, 1]")
        amps = self.reference_state.amplitudes
        if np.abs(amps.imag).max() > 1e-12:
            raise ValueError("reference state must be real in the Z/X frame")


@dataclass
class FidelityCurve:
    target_name: str
    baseline: float
    level: str
    rows: list = field(default_factory=list)   # dicts: Q, f, status, residuals

    def flagged(self) -> list:
        return [r for r in self.rows if r["status"] not in ("optimal",)]


# per-party expansion of K_b^dag K_a as word polynomials:
#   K_0^dag K_0 = (1 + A1)/2
#   K_0^dag K_1 = (A2 + A1 A2 - A2 A1 - A1 A2 A1)/4
#   K_1^dag K_0 = (A2 - A1 A2 + A2 A1 - A1 A2 A1)/4
#   K_1^dag K_1 = (1 - A1)/2
_KRAUS_POLY = {
    (0, 0): {(): 0.5, (1,): 0.5},
    (1, 0): {(2,): 0.25, (1, 2): 0.25, (2, 1): -0.25, (1, 2, 1): -0.25},
    (0, 1): {(2,): 0.25, (1, 2): -0.25, (2, 1): 0.25, (1, 2, 1): -0.25},
    (1, 1): {(): 0.5, (1,): -0.5},
}


def fidelity_functional(target: SwapTarget,
                        structure: MomentMatrixStructure) -> MomentFunctional:
    """Expand <psi_bar| rho_swap |psi_bar> over canonical moments.

    rho_swap's matrix element between ancilla basis states a and b is the
    box moment of prod_p K_{b_p}^dag K_{a_p}, so the fidelity is
    sum_{a,b} psi_bar(a) psi_bar(b) <prod_p K_{b_p}^dag K_{a_p}> -- a
    linear functional with every word representable at level local2.
    """
    psi = target.reference_state.amplitudes.real
    n = target.reference_state.num_parties
    support = [idx for idx in range(len(psi)) if abs(psi[idx]) > 1e-15]

    def bits(idx):
        return tuple((idx >> (n - 1 - p)) & 1 for p in range(n))

    coeffs: dict = {}
    for ia in support:
        for ib in support:
            weight = psi[ia] * psi[ib]
            a_bits, b_bits = bits(ia), bits(ib)
            # product over parties of the per-party polynomials
            partial = [((), 1.0)]  # (per-party words so far, coefficient)
            for p in range(n):
                poly = _KRAUS_POLY[(a_bits[p], b_bits[p])]
                partial = [(words + (w,), c * cw)
                           for words, c in partial
                           for w, cw in poly.items()]
            for words, c in partial:
                key = moment_key(OperatorWord(words))
                coeffs[key] = coeffs.get(key, 0.0) + weight * c
    for key in coeffs:
        if key not in structure.index:
            raise ValueError(f"word '{key}' of the fidelity functional is not "
                             f"representable; use level local2 or finer")
    return MomentFunctional({k: v for k, v in coeffs.items() if v})


def simulate_swap_fidelity(state: StateVector, observables,
                           target: SwapTarget) -> float:
    """Dense oracle: run the swap circuits on the full box+ancilla space.

    Builds the explicit isometry W = tensor_p (K_0^(p) (x) |0> + K_1^(p) (x) |1>)
    from the box space to box (x) ancillas (2^(2N) dimensions), traces
    out the box and evaluates the fidelity directly.  Independent of the
    word-polynomial route above.
    """
    n = state.num_parties
    if len(observables) != n:
        raise ValueError("one observable pair per party required")
    per_party = []
    for pair in observables:
        mats = []
        for obs in pair:
            if isinstance(obs, HermitianOperator):
                obs = obs.entries
            mats.append(np.asarray(obs, dtype=complex))
        o1, o2 = mats
        k0 = (np.eye(2) + o1) / 2.0
        k1 = o2 @ (np.eye(2) - o1) / 2.0
        # map: box qubit -> box qubit (x) ancilla qubit (ancilla last)
        iso = np.zeros((4, 2), dtype=complex)
        iso[0::2, :] = k0      # ancilla bit 0
        iso[1::2, :] = k1      # ancilla bit 1
        per_party.append(iso)
    # full isometry with qubit order (box_1, anc_1, ..., box_N, anc_N)
    W = tensor(*per_party)
    out = (W @ state.amplitudes).reshape((2,) * (2 * n))
    # reorder to (box..., anc...), then trace out the box
    box_axes = tuple(range(0, 2 * n, 2))
    anc_axes = tuple(range(1, 2 * n, 2))
    out = np.transpose(out, box_axes + anc_axes).reshape(2 ** n, 2 ** n)
    # rho_anc[a, b] = sum_box out[box, a] conj(out[box, b])
    rho_anc = np.einsum("xa,xb->ab", out, out.conj())
    psi_bar = target.reference_state.amplitudes
    return float(np.real(np.vdot(psi_bar, rho_anc @ psi_bar)))


def min_fidelity(target: SwapTarget, q_value: float,
                 structure: MomentMatrixStructure, tol: float = 1e-6,
                 bell_mode: str = "equality", **solver_kwargs):
    """Certified lower bound on swap fidelity at Bell value ``q_value``.

    Minimizes the fidelity functional over moment matrices Gamma >= 0
    with the structure's equality classes, unit identity moment and
    Tr(B Gamma) = Q (or >= Q when ``bell_mode='inequality'``, which
    traces the same monotone envelope and is numerically gentler).
    Returns (f, SDPResult); infeasibility (Q above the quantum maximum)
    is reported via the result status.
    """
    if bell_mode not in ("equality", "inequality"):
        raise ValueError(f"unknown bell_mode {bell_mode!r}")
    f_tilde = fidelity_functional(target, structure)
    b_tilde = embed_functional(target.inequality, structure)
    constraints, entry_matrix = structure_constraints(structure)
    bell_matrix = entry_matrix(b_tilde)
    instance = SemidefiniteProgramInstance(
        dim=structure.size,
        objective=entry_matrix(f_tilde),
        constraints=constraints + ([(bell_matrix, float(q_value))]
                                   if bell_mode == "equality" else []),
        inequalities=([(bell_matrix, float(q_value))]
                      if bell_mode == "inequality" else []),
        sense="min")
    result = solve_sdp(instance, tol=tol, **solver_kwargs)
    value = result.optimum if result.ok else None
    return value, result


def fidelity_sdp_instance(target: SwapTarget, q_value: float,
                          structure: MomentMatrixStructure) -> SemidefiniteProgramInstance:
    """The equality-mode SDP for one curve point (e.g. for SDPA export)."""
    f_tilde = fidelity_functional(target, structure)
    b_tilde = embed_functional(target.inequality, structure)
    constraints, entry_matrix = structure_constraints(structure)
    return SemidefiniteProgramInstance(
        dim=structure.size,
        objective=entry_matrix(f_tilde),
        constraints=constraints + [(entry_matrix(b_tilde), float(q_value))],
        sense="min")


def curve(target: SwapTarget, q_grid, level: str = "local2",
          tol: float = 1e-6, structure: MomentMatrixStructure | None = None,
          **solver_kwargs) -> FidelityCurve:
    """One min-fidelity solve per grid point; rows sorted by Q."""
    if structure is None:
        structure = build_structure(build_sequence_set(level))
    out = FidelityCurve(target.name, target.baseline, level)
    for q in sorted(float(q) for q in q_grid):
        f, result = min_fidelity(target, q, structure, tol=tol, **solver_kwargs)
        out.rows.append({
            "Q": q,
            "f": f,
            "status": result.status,
            "residual_primal": result.residual_primal,
            "residual_dual": result.residual_dual,
            "duality_gap": result.duality_gap,
        })
    return out
