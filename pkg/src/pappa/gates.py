"""Dense qudit gates and the state-vector simulator.

Single-qudit conventions (basis |0..d-1>, index arithmetic mod d):

    X|k> = |k+1>        Y|k> = zeta**(1-2k) |k-1>       Z|k> = q**k |k>
    F|k> = d**-0.5 * sum_l q**(k*l) |l>                 G|k> = zeta**(k*k) |k>

Multi-qudit basis: |k_1,...,k_n> maps to index sum(k_j * d**(n-j)), i.e.
qudit 1 is the first (most significant) tensor factor.

Gate application to states is site-local (reshape kernels); full d**n x d**n
matrices are only materialized by the verification helpers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .phases import PhaseRing

# ---------------------------------------------------------------------------
# single-qudit matrices
# ---------------------------------------------------------------------------


def pauli_x_power(ring: PhaseRing, k: int = 1) -> np.ndarray:
    """X**k as a d x d matrix: |m> -> |m+k>."""
    d = ring.d
    m = np.zeros((d, d), dtype=complex)
    for col in range(d):
        m[(col + k) % d, col] = 1.0
    return m


def pauli_y_power(ring: PhaseRing, k: int = 1) -> np.ndarray:
    """Y**k as a d x d matrix: |m> -> zeta**(k*k - 2*k*m) |m-k>."""
    d = ring.d
    m = np.zeros((d, d), dtype=complex)
    for col in range(d):
        m[(col - k) % d, col] = ring.zeta_pow(k * k - 2 * k * col)
    return m


def pauli_z_power(ring: PhaseRing, k: int = 1) -> np.ndarray:
    """Z**k as a d x d matrix: diag(q**(k*m))."""
    return np.diag([ring.q_pow(k * col) for col in range(ring.d)])


def pauli_gate(ring: PhaseRing, which: str) -> np.ndarray:
    """One of the qudit Pauli matrices X, Y, Z."""
    builders = {"X": pauli_x_power, "Y": pauli_y_power, "Z": pauli_z_power}
    if which not in builders:
        raise ValueError(f"unknown Pauli {which!r}")
    return builders[which](ring, 1)


def fourier_gate(ring: PhaseRing) -> np.ndarray:
    """The Fourier matrix F[l, k] = q**(k*l) / sqrt(d)."""
    d = ring.d
    m = np.empty((d, d), dtype=complex)
    for k in range(d):
        for ell in range(d):
            m[ell, k] = ring.q_pow(k * ell)
    return m / d**0.5


def fourier_power(ring: PhaseRing, k: int = 1) -> np.ndarray:
    """F**k using F**2 = parity and F**4 = 1."""
    d = ring.d
    k = k % 4
    if k == 0:
        return np.eye(d, dtype=complex)
    if k == 1:
        return fourier_gate(ring)
    parity = np.zeros((d, d), dtype=complex)
    for col in range(d):
        parity[(-col) % d, col] = 1.0
    if k == 2:
        return parity
    return fourier_gate(ring).conj().T


def gaussian_gate(ring: PhaseRing) -> np.ndarray:
    """The Gaussian G = diag(zeta**(k*k))."""
    return gaussian_power(ring, 1)


def gaussian_power(ring: PhaseRing, k: int = 1) -> np.ndarray:
    """G**k = diag(zeta**(k*m*m))."""
    return np.diag([ring.zeta_pow(k * col * col) for col in range(ring.d)])


_GATE_BUILDERS = {
    "X": pauli_x_power,
    "Y": pauli_y_power,
    "Z": pauli_z_power,
    "F": fourier_power,
    "G": gaussian_power,
}


def gate_power(ring: PhaseRing, name: str, power: int = 1) -> np.ndarray:
    """Named single-qudit gate raised to an integer power (exact phases)."""
    if name not in _GATE_BUILDERS:
        raise ValueError(f"unknown gate {name!r}")
    return _GATE_BUILDERS[name](ring, power)


# ---------------------------------------------------------------------------
# multi-qudit index helpers
# ---------------------------------------------------------------------------


def basis_index(digits, d: int) -> int:
    """Index of |k_1,...,k_n> with qudit 1 most significant."""
    idx = 0
    for k in digits:
        idx = idx * d + (k % d)
    return idx


def index_digits(idx: int, d: int, n: int) -> tuple[int, ...]:
    """Inverse of :func:`basis_index`."""
    out = []
    for _ in range(n):
        out.append(idx % d)
        idx //= d
    return tuple(reversed(out))


def all_digit_tuples(d: int, n: int):
    """All n-tuples over 0..d-1 in basis-index order."""
    for idx in range(d**n):
        yield index_digits(idx, d, n)


def kron_all(mats) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


def embed_site_matrix(d: int, n: int, site: int, m: np.ndarray) -> np.ndarray:
    """1 x ... x m x ... x 1 with ``m`` at tensor slot ``site`` (0-based)."""
    mats = [np.eye(d, dtype=complex)] * n
    mats[site] = m
    return kron_all(mats)


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------


@dataclass
class QState:
    """Dense n-qudit state vector in the decreasing product basis."""

    d: int
    n: int
    vector: np.ndarray
    normalized: bool = True

    @classmethod
    def basis(cls, d: int, n: int, digits) -> "QState":
        digits = tuple(digits)
        if len(digits) != n:
            raise ValueError("wrong number of digits")
        v = np.zeros(d**n, dtype=complex)
        v[basis_index(digits, d)] = 1.0
        return cls(d, n, v)

    @classmethod
    def zero(cls, d: int, n: int) -> "QState":
        return cls.basis(d, n, (0,) * n)

    def copy(self) -> "QState":
        return QState(self.d, self.n, self.vector.copy(), self.normalized)

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def fidelity(self, other: "QState") -> float:
        """|<self|other>| (1 for equality up to global phase)."""
        return float(abs(np.vdot(self.vector, other.vector)))


def apply_site_gate(state: QState, m: np.ndarray, site: int) -> QState:
    """Apply a d x d matrix to one qudit (0-based site)."""
    d, n = state.d, state.n
    if not 0 <= site < n:
        raise ValueError(f"site {site} out of range for n={n}")
    t = state.vector.reshape([d] * n)
    t = np.moveaxis(np.tensordot(m, t, axes=([1], [site])), 0, site)
    return QState(d, n, t.reshape(-1), state.normalized)


def apply_two_site_gate(state: QState, m: np.ndarray, site_a: int, site_b: int) -> QState:
    """Apply a d^2 x d^2 matrix to the (ordered) pair of qudits (a, b)."""
    d, n = state.d, state.n
    if site_a == site_b:
        raise ValueError("two-site gate needs distinct sites")
    t = state.vector.reshape([d] * n)
    op = m.reshape(d, d, d, d)
    t = np.tensordot(op, t, axes=([2, 3], [site_a, site_b]))
    t = np.moveaxis(t, [0, 1], [site_a, site_b])
    return QState(d, n, t.reshape(-1), state.normalized)


def apply_full_matrix(state: QState, m: np.ndarray) -> QState:
    return QState(state.d, state.n, m @ state.vector, state.normalized)


# ---------------------------------------------------------------------------
# controlled gates
# ---------------------------------------------------------------------------


def apply_controlled(
    state: QState, a: np.ndarray, control: int, target: int, exponent: int = 1
) -> QState:
    """Apply A**(exponent * k) to ``target`` where k is the control value."""
    d, n = state.d, state.n
    if control == target:
        raise ValueError("control and target must differ")
    t = state.vector.reshape([d] * n)
    t = np.moveaxis(t, control, 0)
    pieces = []
    tgt = target if target < control else target - 1
    for c in range(d):
        sub = QState(d, n - 1, t[c].reshape(-1), False)
        if exponent * c != 0:
            sub = apply_site_gate(sub, np.linalg.matrix_power(a, exponent * c), tgt)
        pieces.append(sub.vector.reshape([d] * (n - 1)))
    t = np.stack(pieces, axis=0)
    t = np.moveaxis(t, 0, control)
    return QState(d, n, t.reshape(-1), state.normalized)


def controlled_gate(
    ring: PhaseRing,
    n: int,
    control: int,
    target: int,
    a: np.ndarray,
    flavor: str = "first-controls",
) -> np.ndarray:
    """Dense matrix of the controlled gate on an n-qudit register.

    ``first-controls`` is C_{1,A}: |k_c, k_t> -> |k_c, A**k_c k_t> with the
    listed control site doing the controlling; ``second-controls`` (C_{A,1})
    swaps the roles, i.e. the *target argument* controls powers applied to
    the *control argument*.
    """
    if flavor == "second-controls":
        control, target = target, control
    elif flavor != "first-controls":
        raise ValueError(f"unknown flavor {flavor!r}")
    if control == target:
        raise ValueError("control and target must differ")
    d = ring.d
    dim = d**n
    m = np.zeros((dim, dim), dtype=complex)
    powers = [np.linalg.matrix_power(a, c) for c in range(d)]
    for idx in range(dim):
        digits = index_digits(idx, d, n)
        c = digits[control]
        col = np.zeros(dim, dtype=complex)
        col[idx] = 1.0
        sub = QState(d, n, col)
        sub = apply_site_gate(sub, powers[c], target)
        m[:, idx] = sub.vector
    return m


def cz_gate(ring: PhaseRing, n: int = 2, site_a: int = 0, site_b: int = 1) -> np.ndarray:
    """C_Z = diag(q**(k_a * k_b)); identical for both control flavors."""
    d = ring.d
    dim = d**n
    m = np.zeros((dim, dim), dtype=complex)
    for idx in range(dim):
        digits = index_digits(idx, d, n)
        m[idx, idx] = ring.q_pow(digits[site_a] * digits[site_b])
    return m


# ---------------------------------------------------------------------------
# measurement
# ---------------------------------------------------------------------------


def site_probabilities(state: QState, site: int) -> np.ndarray:
    d, n = state.d, state.n
    t = np.abs(state.vector.reshape([d] * n)) ** 2
    axes = tuple(i for i in range(n) if i != site)
    return t.sum(axis=axes)


def project_site(state: QState, site: int, outcome: int) -> tuple[QState, float]:
    """Project one qudit onto |outcome> and renormalize.

    Returns (post_state, branch_probability); the post state keeps all n
    qudits (the measured one collapses to |outcome>).
    """
    d, n = state.d, state.n
    probs = site_probabilities(state, site)
    p = float(probs[outcome])
    t = state.vector.reshape([d] * n).copy()
    sel = [slice(None)] * n
    for k in range(d):
        if k != outcome:
            sel[site] = k
            t[tuple(sel)] = 0.0
    v = t.reshape(-1)
    if p > 0:
        v = v / np.sqrt(p)
    return QState(d, n, v, state.normalized), p


def measure(state: QState, site: int, rng: np.random.Generator) -> tuple[int, QState, float]:
    """Computational-basis measurement of one site, sampled with ``rng``."""
    probs = site_probabilities(state, site)
    probs = probs / probs.sum()
    outcome = int(rng.choice(state.d, p=probs))
    post, p = project_site(state, site, outcome)
    return outcome, post, p


# ---------------------------------------------------------------------------
# symbolic gates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GateSpec:
    """A symbolic gate with site placement, resolvable against any register.

    Kinds: ``X Y Z F G`` (with integer ``power``), ``ctrl`` (controlled
    power of a named base gate; sites = (control, target)), ``cz``,
    ``braid`` (sites = (strand,), ``sign`` +-1), ``sym`` (sites =
    (strand,), parameter ``m``), ``sft`` (whole register), and ``matrix``
    (a custom matrix over ``sites``).
    """

    kind: str
    sites: tuple[int, ...] = ()
    power: int = 1
    base: str = "X"
    sign: int = 1
    m: int = 0
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if self.kind == "ctrl" and len(set(self.sites)) != 2:
            raise ValueError("controlled gates need distinct control and target")


def apply_gate_spec(ring: PhaseRing, state: QState, spec: GateSpec) -> QState:
    """Apply a symbolic gate to a state (site-local kernels throughout)."""
    n = state.n
    if any(not 0 <= s < n for s in spec.sites):
        raise ValueError(f"sites {spec.sites} outside register of {n}")
    if spec.kind in _GATE_BUILDERS:
        (site,) = spec.sites
        return apply_site_gate(state, gate_power(ring, spec.kind, spec.power), site)
    if spec.kind == "ctrl":
        control, target = spec.sites
        return apply_controlled(
            state, gate_power(ring, spec.base, 1), control, target, spec.power
        )
    if spec.kind == "cz":
        a, b = spec.sites
        return apply_controlled(state, pauli_z_power(ring, 1), a, b, spec.power)
    if spec.kind == "braid":
        from . import evaluator

        (strand,) = spec.sites
        return apply_full_matrix(
            state, evaluator.braid_op(ring, n, strand, spec.sign).matrix
        )
    if spec.kind == "sym":
        (strand,) = spec.sites
        return apply_full_matrix(state, sym_gate(ring, n, strand, spec.m))
    if spec.kind == "sft":
        return apply_full_matrix(state, sft_matrix(ring, n))
    if spec.kind == "matrix":
        if spec.matrix is None:
            raise ValueError("matrix gate needs a matrix")
        if len(spec.sites) == 1:
            return apply_site_gate(state, spec.matrix, spec.sites[0])
        if len(spec.sites) == 2:
            return apply_two_site_gate(state, spec.matrix, *spec.sites)
        raise ValueError("custom matrices support one or two sites")
    raise ValueError(f"unknown gate kind {spec.kind!r}")


# ---------------------------------------------------------------------------
# symmetry family b_m and the string Fourier transform
# ---------------------------------------------------------------------------


def sym_gate_matrix(ring: PhaseRing, m: int) -> np.ndarray:
    """Two-qudit b_m: |k,l> -> q**(m*k*l) |l,k>; b_0 is SWAP."""
    d = ring.d
    out = np.zeros((d * d, d * d), dtype=complex)
    for k in range(d):
        for l in range(d):
            out[l * d + k, k * d + l] = ring.q_pow(m * k * l)
    return out


def sym_gate(ring: PhaseRing, n: int, strand: int, m: int) -> np.ndarray:
    """b_m embedded on the adjacent qudit pair at straddling strand ``strand``.

    ``strand`` is 0-based and must be odd (the boundary between qudits
    (strand-1)//2 and (strand+1)//2).
    """
    if strand % 2 != 1 or strand >= 2 * n - 1:
        raise ValueError(f"strand {strand} is not a qudit boundary for n={n}")
    j = (strand - 1) // 2
    return kron_all(
        [np.eye(ring.d, dtype=complex)] * j
        + [sym_gate_matrix(ring, m)]
        + [np.eye(ring.d, dtype=complex)] * (n - j - 2)
    )


def sft_matrix(ring: PhaseRing, n: int) -> np.ndarray:
    """Closed-form string Fourier transform on n qudits.

    <l|SFT|k> = d**((1-n)/2) * zeta**(|l|**2) * prod_{j1<j2} q**(-l_j1 k_j2)
    on the charge-conserving sector |l| == |k| (mod d), zero elsewhere.
    """
    d = ring.d
    dim = d**n
    out = np.zeros((dim, dim), dtype=complex)
    scale = float(d) ** ((1 - n) / 2)
    for kidx in range(dim):
        ks = index_digits(kidx, d, n)
        ktot = sum(ks)
        for lidx in range(dim):
            ls = index_digits(lidx, d, n)
            if (sum(ls) - ktot) % d != 0:
                continue
            expo = 0
            prefix = 0
            for j2 in range(n):
                expo -= prefix * ks[j2]
                prefix += ls[j2]
            out[lidx, kidx] = scale * ring.zeta_pow(sum(ls) ** 2) * ring.q_pow(expo)
    return out


def sft_gate(ring: PhaseRing, n: int, method: str = "matrix-formula") -> np.ndarray:
    """String Fourier transform, by closed form or by the braid product."""
    if method == "matrix-formula":
        return sft_matrix(ring, n)
    if method == "braid-product":
        from . import evaluator

        return evaluator.sft_via_braids(ring, n)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# simplifying tricks
# ---------------------------------------------------------------------------


@dataclass
class TrickReport:
    residuals: dict[str, float] = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    def ok(self, tol: float = 1e-9) -> bool:
        return self.max_residual < tol


def _branch_ensemble(state: QState, prep: np.ndarray | None, site: int):
    """All (probability, post-state) branches of measuring ``site`` after ``prep``."""
    work = apply_full_matrix(state, prep) if prep is not None else state
    out = []
    for k in range(state.d):
        post, p = project_site(work, site, k)
        out.append((k, p, post))
    return out


def circuit_tricks_check(ring: PhaseRing, rng: np.random.Generator | None = None) -> TrickReport:
    """Verify the four protocol-simplification tricks.

    Trick 1 is an exact operator identity; tricks 2-4 are branch-wise
    statements (distributions exact, post states up to a phase per branch).
    """
    rng = rng or np.random.default_rng(0)
    d = ring.d
    rep = TrickReport()

    # Trick 1: the control wire commutes with the Gaussian on the control.
    a = _random_unitary(d, rng)
    for sgn in (1, -1):
        c1a = controlled_gate(ring, 2, 0, 1, a)
        g = embed_site_matrix(d, 2, 0, gaussian_power(ring, sgn))
        rep.residuals[f"trick1_g{sgn:+d}"] = float(np.abs(g @ c1a - c1a @ g).max())

    # Trick 2: a Gaussian before a meter changes nothing observable.
    psi = _random_state(ring, 2, rng)
    for sgn in (1, -1):
        plain = _branch_ensemble(psi, None, 0)
        gauss = _branch_ensemble(psi, embed_site_matrix(d, 2, 0, gaussian_power(ring, sgn)), 0)
        worst = 0.0
        for (_, p0, s0), (_, p1, s1) in zip(plain, gauss):
            worst = max(worst, abs(p0 - p1))
            if p0 > 1e-12:
                worst = max(worst, abs(1.0 - s0.fidelity(s1)))
        rep.residuals[f"trick2_g{sgn:+d}"] = worst

    # Trick 3: remove the controlled X^-1 before double meters by reindexing
    # the classically controlled correction.  The correction exponent is a
    # mod-d dit, so the identity needs T**d = 1; draw a random order-d T.
    t = _random_order_d_unitary(ring, rng)
    psi = _random_state(ring, 3, rng)
    worst = 0.0
    lhs_pre = apply_controlled(psi, pauli_x_power(ring, 1), 0, 1, exponent=-1)
    for m1 in range(d):
        l1, p1 = project_site(lhs_pre, 0, m1)
        r1, q1 = project_site(psi, 0, m1)
        worst = max(worst, abs(p1 - q1))
        for m2 in range(d):
            l2, p2 = project_site(l1, 1, m2)
            lhs = apply_site_gate(l2, np.linalg.matrix_power(t, m2), 2)
            # rhs measures the untouched state; outcome of meter 2 shifts by m1
            m2r = (m2 + m1) % d
            r2, q2 = project_site(r1, 1, m2r)
            rhs = apply_site_gate(r2, np.linalg.matrix_power(t, m2r), 2)
            rhs = apply_site_gate(rhs, np.linalg.matrix_power(np.linalg.inv(t), m1), 2)
            worst = max(worst, abs(p2 - q2))
            if p1 * p2 > 1e-12:
                # compare the traced-out target-qudit branch states up to phase
                worst = max(worst, abs(1.0 - abs(np.vdot(_site2_vec(lhs, m1, m2), _site2_vec(rhs, m1, m2r)))))
    rep.residuals["trick3"] = worst

    # Trick 4: meter-controlled Y^-m X^-m equals Z^m up to the phase
    # zeta**(-m*m) per branch.
    worst = 0.0
    for m in range(d):
        lhs = pauli_y_power(ring, -m) @ pauli_x_power(ring, -m)
        rhs = ring.zeta_pow(-m * m) * pauli_z_power(ring, m)
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    rep.residuals["trick4"] = worst
    return rep


def _site2_vec(state: QState, m1: int, m2: int) -> np.ndarray:
    """Slice out the wire-3 vector of a 3-qudit state with wires 1,2 collapsed."""
    d = state.d
    t = state.vector.reshape([d] * 3)
    return t[m1, m2, :]


def _random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _random_order_d_unitary(ring: PhaseRing, rng: np.random.Generator) -> np.ndarray:
    """Random unitary with eigenvalues that are d-th roots of unity."""
    v = _random_unitary(ring.d, rng)
    eig = np.diag([ring.q_pow(int(rng.integers(ring.d))) for _ in range(ring.d)])
    return v @ eig @ v.conj().T


def _random_state(ring: PhaseRing, n: int, rng: np.random.Generator) -> QState:
    v = rng.normal(size=ring.d**n) + 1j * rng.normal(size=ring.d**n)
    return QState(ring.d, n, v / np.linalg.norm(v))
