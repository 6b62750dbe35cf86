"""Clifford-group checks: named identities, BFS generation, membership.

The two dressing identities verified here are

    C_Z       = (F**-1 x F G**-1) S (F G F**-1 x F**-1 G**-1)
    b_{2,3,-} = omega**0.5 (1 x G**-1) S (G**-1 x 1)

with S the two-qudit string Fourier transform.  Each verifier also
records the residual of a nearby variant dressing (one Gaussian factor,
resp. one power of omega, off) that does *not* hold; keeping the failing
variant visible pins the phase conventions against regressions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import evaluator, gates
from .gates import (
    cz_gate,
    fourier_gate,
    gaussian_gate,
    kron_all,
    pauli_gate,
    sft_matrix,
)
from .phases import PhaseRing

_HASH_GRID = 1e-6


@dataclass(frozen=True)
class PhaselessUnitary:
    """A unitary with the global phase stripped by a fixed convention.

    The first entry with modulus above tolerance in column-major order is
    rotated to the positive real axis; canonicalization is idempotent.
    """

    matrix: np.ndarray

    @classmethod
    def of(cls, m: np.ndarray, tol: float = 1e-9) -> "PhaselessUnitary":
        flat = m.reshape(-1, order="F")
        idx = np.argmax(np.abs(flat) > tol)
        pivot = flat[idx]
        if abs(pivot) <= tol:
            raise ValueError("zero matrix cannot be canonicalized")
        out = m * (pivot.conjugate() / abs(pivot))
        return cls(out)

    def key(self) -> bytes:
        re = np.round(self.matrix.real / _HASH_GRID).astype(np.int64)
        im = np.round(self.matrix.imag / _HASH_GRID).astype(np.int64)
        return re.tobytes() + im.tobytes()

    def close_to(self, m: np.ndarray, tol: float = 1e-8) -> bool:
        other = PhaselessUnitary.of(m)
        return bool(np.abs(self.matrix - other.matrix).max() < tol)


# ---------------------------------------------------------------------------
# named identity checks
# ---------------------------------------------------------------------------


@dataclass
class IdentityReport:
    residual: float
    alternate_residual: float | None = None
    extras: dict[str, float] = field(default_factory=dict)

    def ok(self, tol: float = 1e-9) -> bool:
        return self.residual < tol


def verify_cz_from_sft(ring: PhaseRing) -> IdentityReport:
    """C_Z from the 2-qudit SFT dressed by single-qudit Cliffords."""
    d = ring.d
    s = sft_matrix(ring, 2)
    f, g = fourier_gate(ring), gaussian_gate(ring)
    fi, gi = np.linalg.inv(f), np.linalg.inv(g)
    cz = cz_gate(ring, 2)
    dressing = kron_all([fi, f @ gi]) @ s @ kron_all([f @ g @ fi, fi @ gi])
    variant = kron_all([g @ fi, f @ gi]) @ s @ kron_all([np.eye(d), fi @ gi])
    return IdentityReport(
        residual=float(np.abs(cz - dressing).max()),
        alternate_residual=float(np.abs(cz - variant).max()),
    )


def verify_sft_factorizations(ring: PhaseRing) -> IdentityReport:
    """Both controlled-gate factorizations of the SFT plus the Bell corollary."""
    d = ring.d
    s = sft_matrix(ring, 2)
    f, g = fourier_gate(ring), gaussian_gate(ring)
    gi = np.linalg.inv(g)
    x = pauli_gate(ring, "X")
    c1x = gates.controlled_gate(ring, 2, 0, 1, x)
    cx1 = gates.controlled_gate(ring, 2, 0, 1, x, flavor="second-controls")
    fact1 = kron_all([gi, g]) @ np.linalg.inv(c1x) @ kron_all([f, np.eye(d)]) @ c1x
    fact2 = np.linalg.inv(cx1) @ kron_all([np.eye(d), f]) @ cx1 @ kron_all([g, gi])
    zero = np.zeros(d * d)
    zero[0] = 1.0
    bell = np.linalg.inv(c1x) @ kron_all([f, np.eye(d)]) @ zero
    rep = IdentityReport(
        residual=max(
            float(np.abs(s - fact1).max()),
            float(np.abs(s - fact2).max()),
            float(np.abs(s @ zero - bell).max()),
        )
    )
    rep.extras["factorization1"] = float(np.abs(s - fact1).max())
    rep.extras["factorization2"] = float(np.abs(s - fact2).max())
    rep.extras["bell_corollary"] = float(np.abs(s @ zero - bell).max())
    return rep


def verify_braid_gaussian_dressing(ring: PhaseRing) -> IdentityReport:
    """b_{2,3,-} as a Gaussian dressing of the SFT (corrected scalar omega**0.5)."""
    d = ring.d
    s = sft_matrix(ring, 2)
    g = gaussian_gate(ring)
    gi = np.linalg.inv(g)
    core = kron_all([np.eye(d), gi]) @ s @ kron_all([gi, np.eye(d)])
    b23 = evaluator.braid_op(ring, 2, 1, -1).matrix
    rep = IdentityReport(
        residual=float(np.abs(b23 - ring.omega_sqrt * core).max()),
        alternate_residual=float(np.abs(b23 - ring.omega * core).max()),
    )
    b23p = evaluator.braid_op(ring, 2, 1, +1).matrix
    rep.extras["inverse_pair"] = float(
        np.abs(b23 @ b23p - np.eye(d * d)).max()
    )
    return rep


# ---------------------------------------------------------------------------
# group generation and membership
# ---------------------------------------------------------------------------


@dataclass
class GroupReport:
    order: int
    cap_hit: bool
    membership: dict[str, bool]
    generator_count: int


def generate_group(
    ring: PhaseRing,
    n: int,
    generators: dict[str, np.ndarray],
    cap: int = 200_000,
    probes: dict[str, np.ndarray] | None = None,
) -> GroupReport:
    """Breadth-first closure of the generators modulo global phase.

    Reports the group order (or that the cap was hit) and membership
    flags for each probe matrix.  Orders are never asserted from memory;
    tests compare two runs with permuted generator order.
    """
    if ring.d**n > 81:
        raise ValueError("group generation is desk-scale only (d**n <= 81)")
    gens = list(generators.values())
    probes = probes or {}
    dim = ring.d**n
    start = PhaselessUnitary.of(np.eye(dim, dtype=complex))
    seen = {start.key()}
    frontier = deque([start.matrix])
    found = {name: False for name in probes}
    probe_canon = {name: PhaselessUnitary.of(m) for name, m in probes.items()}
    count = 1
    cap_hit = False
    while frontier:
        cur = frontier.popleft()
        for gen in gens:
            nxt = PhaselessUnitary.of(gen @ cur)
            key = nxt.key()
            if key in seen:
                continue
            seen.add(key)
            count += 1
            for name, canon in probe_canon.items():
                if not found[name] and canon.close_to(nxt.matrix):
                    found[name] = True
            if count >= cap:
                cap_hit = True
                frontier.clear()
                break
            frontier.append(nxt.matrix)
    return GroupReport(
        order=count,
        cap_hit=cap_hit,
        membership=found,
        generator_count=len(gens),
    )


def _pauli_word_match(ring: PhaseRing, n: int, w: np.ndarray, tol: float) -> bool:
    """True iff w is a phase times X**x Z**z words on the register."""
    d = ring.d
    dim = d**n
    # every column must have exactly one entry of unit modulus
    for col in range(dim):
        v = w[:, col]
        mags = np.abs(v)
        top = np.argmax(mags)
        if abs(mags[top] - 1.0) > tol or mags.sum() - mags[top] > tol:
            return False
    # constant digit offset per site
    shift0 = gates.index_digits(int(np.argmax(np.abs(w[:, 0]))), d, n)
    for col in range(dim):
        ks = gates.index_digits(col, d, n)
        row = int(np.argmax(np.abs(w[:, col])))
        ls = gates.index_digits(row, d, n)
        if any((l - k - s) % d for k, l, s in zip(ks, ls, shift0)):
            return False
    # phases must be q**(linear form) relative to column 0
    base = w[int(np.argmax(np.abs(w[:, 0]))), 0]
    zs = []
    for site in range(n):
        unit = [0] * n
        unit[site] = 1
        col = gates.basis_index(unit, d)
        val = w[int(np.argmax(np.abs(w[:, col]))), col] / base
        match_z = None
        for z in range(d):
            if abs(val - ring.q_pow(z)) < 10 * tol:
                match_z = z
                break
        if match_z is None:
            return False
        zs.append(match_z)
    for col in range(dim):
        ks = gates.index_digits(col, d, n)
        expect = base * ring.q_pow(sum(z * k for z, k in zip(zs, ks)))
        if abs(w[int(np.argmax(np.abs(w[:, col]))), col] - expect) > 10 * tol:
            return False
    return True


def is_clifford(ring: PhaseRing, u: np.ndarray, tol: float = 1e-8) -> bool:
    """True iff u maps every Pauli generator to a phase times a Pauli word."""
    dim = u.shape[0]
    n = 0
    size = 1
    while size < dim:
        size *= ring.d
        n += 1
    if size != dim:
        raise ValueError("matrix size is not a power of d")
    if np.abs(u @ u.conj().T - np.eye(dim)).max() > 1e-8:
        raise ValueError("is_clifford expects a unitary")
    ui = u.conj().T
    for site in range(n):
        for p in ("X", "Z"):
            word = gates.embed_site_matrix(ring.d, n, site, pauli_gate(ring, p))
            if not _pauli_word_match(ring, n, u @ word @ ui, tol):
                return False
    return True
