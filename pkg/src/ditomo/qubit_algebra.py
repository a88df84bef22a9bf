"""Dense N-qubit linear algebra: states, Pauli words, Bell operators.

Everything is dense complex at dimension <= 16.  Tensor products are
big-endian: party 1 occupies the most significant qubit, so the basis
index of |x_1 ... x_N> is the integer with binary digits x_1 ... x_N.
"""

from __future__ import annotations

import numpy as np

from .pi_bell import GeneralBellExpression

HERMITICITY_TOL = 1e-12
NORM_TOL = 1e-12

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class StateVector:
    """Unit-norm pure state of ``num_parties`` qubits."""

    def __init__(self, amplitudes, num_parties: int | None = None):
        amps = np.asarray(amplitudes, dtype=complex)
        if amps.ndim != 1:
            raise ValueError("amplitudes must be a vector")
        n = int(np.log2(len(amps)))
        if 2 ** n != len(amps):
            raise ValueError("length must be a power of two")
        if num_parties is None:
            num_parties = n
        elif num_parties != n:
            raise ValueError("num_parties inconsistent with vector length")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm {norm})")
        self.amplitudes = amps
        self.amplitudes.setflags(write=False)
        self.num_parties = num_parties

    @property
    def dim(self) -> int:
        return len(self.amplitudes)

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "StateVector") -> float:
        """|<self|other>|^2 — global phase insensitive."""
        return abs(self.overlap(other)) ** 2

    def __repr__(self):
        return f"StateVector(N={self.num_parties})"


class HermitianOperator:
    """Hermitian matrix on N qubits, validated at construction."""

    def __init__(self, entries):
        mat = np.asarray(entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("operator must be a square matrix")
        if np.abs(mat - mat.conj().T).max() > HERMITICITY_TOL:
            raise ValueError("matrix is not Hermitian")
        self.entries = mat
        self.entries.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __add__(self, other):
        return HermitianOperator(self.entries + other.entries)

    def __sub__(self, other):
        return HermitianOperator(self.entries - other.entries)

    def __mul__(self, scalar):
        return HermitianOperator(self.entries * float(scalar))

    __rmul__ = __mul__

    def apply(self, state: StateVector) -> np.ndarray:
        return self.entries @ state.amplitudes

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim})"


class QubitScenario:
    """A concrete qubit realization: a state plus per-party observable pairs."""

    def __init__(self, state: StateVector, observables):
        if len(observables) != state.num_parties:
            raise ValueError("one observable pair per party required")
        self.state = state
        self.observables = [tuple(pair) for pair in observables]

    def bell_value(self, expression: GeneralBellExpression) -> float:
        return expectation(self.state,
                           bell_operator(expression, self.observables))

    def __repr__(self):
        return f"QubitScenario(N={self.state.num_parties})"


class PlanarObservable:
    """Binary observable cos(phi) Z + sin(phi) X in the X-Z plane."""

    def __init__(self, angle: float):
        self.angle = float(angle)

    def matrix(self) -> HermitianOperator:
        return observable_matrix(self)

    def __repr__(self):
        return f"PlanarObservable(angle={self.angle})"


def observable_matrix(o: PlanarObservable) -> HermitianOperator:
    c, s = np.cos(o.angle), np.sin(o.angle)
    return HermitianOperator(c * PAULI["Z"] + s * PAULI["X"])


def tensor(*matrices) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for m in matrices:
        out = np.kron(out, m)
    return out


def build_pauli_word(letters) -> HermitianOperator:
    """Tensor product of single-qubit Paulis, e.g. ("Z", "I", "I")."""
    letters = tuple(letters)
    if not 1 <= len(letters) <= 4:
        raise ValueError("supported word lengths are 1..4")
    mats = []
    for sym in letters:
        if sym not in PAULI:
            raise ValueError(f"invalid Pauli symbol {sym!r}")
        mats.append(PAULI[sym])
    return HermitianOperator(tensor(*mats))


def bell_operator(expression: GeneralBellExpression, observables) -> HermitianOperator:
    """Substitute concrete per-party observables into a Bell expression.

    ``observables`` gives, per party, the pair of matrices for settings 1
    and 2 (as HermitianOperator or raw 2x2 arrays); setting 0 is identity.
    """
    n = expression.num_parties
    if len(observables) != n:
        raise ValueError("one observable pair per party required")
    site_ops = []
    for pair in observables:
        mats = [np.eye(2, dtype=complex)]
        for obs in pair:
            if isinstance(obs, HermitianOperator):
                obs = obs.entries
            obs = np.asarray(obs, dtype=complex)
            if obs.shape != (2, 2):
                raise ValueError("observables must be 2x2")
            mats.append(obs)
        site_ops.append(mats)
    total = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for settings, coeff in expression.coefficients.items():
        total += float(coeff) * tensor(*(site_ops[k][x] for k, x in enumerate(settings)))
    return HermitianOperator(total)


def expectation(state: StateVector, operator: HermitianOperator) -> float:
    if state.dim != operator.dim:
        raise ValueError("dimension mismatch")
    value = np.vdot(state.amplitudes, operator.entries @ state.amplitudes)
    return float(value.real)


def top_eigenpair(operator: HermitianOperator):
    """Largest eigenvalue and a unit eigenvector (global phase arbitrary)."""
    values, vectors = np.linalg.eigh(operator.entries)
    vec = vectors[:, -1]
    return float(values[-1]), StateVector(vec / np.linalg.norm(vec))


def max_overlap_under_local_unitaries(psi: StateVector, phi: StateVector,
                                      iters: int = 200, seed: int = 0) -> float:
    """max_{V_1,...,V_N} |<psi| V_1 x ... x V_N |phi>|^2 by alternating SVD.

    Classic coordinate ascent: the optimal single-party unitary given the
    others is read off from the SVD of the 2x2 overlap environment.  Run
    from a few random starts to dodge local maxima.
    """
    if psi.num_parties != phi.num_parties:
        raise ValueError("party count mismatch")
    n = psi.num_parties
    rng = np.random.default_rng(seed)
    best = 0.0
    for start in range(12):
        if start == 0:
            us = [np.eye(2, dtype=complex) for _ in range(n)]
        else:
            us = []
            for _ in range(n):
                raw = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
                q, _r = np.linalg.qr(raw)
                us.append(q)
        prev = -1.0
        for _ in range(iters):
            for k in range(n):
                # environment E_k: overlap as Tr(U_k^T E_k)
                shape = (2,) * n
                a = psi.amplitudes.conj().reshape(shape)
                b = phi.amplitudes.reshape(shape)
                for j in range(n):
                    if j != k:
                        b = np.tensordot(us[j], b, axes=([1], [j]))
                        b = np.moveaxis(b, 0, j)
                env = np.tensordot(a, b, axes=(
                    [j for j in range(n) if j != k],
                    [j for j in range(n) if j != k]))
                # overlap = Tr(U_k env^T); the maximizer over unitaries comes
                # from the SVD of env^T
                u, _s, vh = np.linalg.svd(env.T)
                us[k] = (u @ vh).conj().T
            val = abs(np.vdot(
                psi.amplitudes,
                tensor(*us) @ phi.amplitudes)) ** 2
            if abs(val - prev) < 1e-14:
                break
            prev = val
        best = max(best, prev)
    return best


# -- reference states ---------------------------------------------------------

def basis_state(bits) -> StateVector:
    bits = tuple(bits)
    amps = np.zeros(2 ** len(bits))
    idx = 0
    for b in bits:
        idx = 2 * idx + int(b)
    amps[idx] = 1.0
    return StateVector(amps)


def w_state() -> StateVector:
    amps = np.zeros(8)
    amps[[0b001, 0b010, 0b100]] = 1.0 / np.sqrt(3.0)
    return StateVector(amps)


def w_bar_state() -> StateVector:
    amps = np.zeros(8)
    amps[[0b011, 0b101, 0b110]] = 1.0 / np.sqrt(3.0)
    return StateVector(amps)


def ghz_state(num_parties: int) -> StateVector:
    amps = np.zeros(2 ** num_parties)
    amps[0] = amps[-1] = 1.0 / np.sqrt(2.0)
    return StateVector(amps)


def cluster_state() -> StateVector:
    amps = np.zeros(16)
    amps[[0b0000, 0b0011, 0b1100]] = 0.5
    amps[0b1111] = -0.5
    return StateVector(amps)
