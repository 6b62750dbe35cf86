"""Named verification suites with machine-readable reports.

Each suite returns an ordered list of (key, value) report lines plus a
pass flag; the CLI prints them as ``key=value`` and a final PASS/FAIL.
Suites: relations, sft, entropy, clifford, tricks, protocols.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import clifford as cliffordmod
from . import entangle, evaluator, gates, protocols
from .diagrams import (
    BraidNeg,
    BraidPos,
    Cap,
    Charge,
    Cup,
    Diagram,
    compose,
    sft_rotate,
)
from .evaluator import evaluate
from .phases import make_phase_ring


@dataclass
class SuiteResult:
    name: str
    lines: list[tuple[str, str]] = field(default_factory=list)
    worst: float = 0.0
    tol: float = 1e-9

    def add(self, key: str, value: float) -> None:
        self.lines.append((key, f"{value:.6e}"))
        self.worst = max(self.worst, value)

    def note(self, key: str, value) -> None:
        self.lines.append((key, str(value)))

    @property
    def passed(self) -> bool:
        return self.worst < self.tol


def _mx(a) -> float:
    return float(np.abs(np.asarray(a)).max())


# ---------------------------------------------------------------------------


def suite_relations(d: int, tol: float = 1e-9) -> SuiteResult:
    """Planar relations, Reidemeister moves, particle-braid, braid-Fourier."""
    ring = make_phase_ring(d)
    res = SuiteResult("relations", tol=tol)
    ev = lambda dia: evaluate(ring, dia).matrix

    loop = Diagram.identity(d, 0).then(Cap(0)).then(Cup(0))
    res.add("quantum_dimension", abs(ev(loop)[0, 0] - d**0.5))

    worst = 0.0
    for k in range(1, d):
        dia = Diagram.identity(d, 0).then(Cap(0)).then(Charge(1, k)).then(Cup(0))
        worst = max(worst, abs(ev(dia)[0, 0]))
    res.add("neutrality", worst)

    worst = 0.0
    for k in range(d):
        for l in range(d):
            lo = ev(
                Diagram.identity(d, 4).then(Charge(0, k, 0)).then(Charge(3, l, 1))
            )
            hi = ev(
                Diagram.identity(d, 4).then(Charge(0, k, 1)).then(Charge(3, l, 0))
            )
            worst = max(worst, _mx(lo - ring.q_pow(k * l) * hi))
            same = ev(
                Diagram.identity(d, 4).then(Charge(0, k, 0)).then(Charge(3, l, 0))
            )
            worst = max(worst, _mx(same - ring.zeta_pow(-k * l) * lo))
    res.add("para_isotopy_twisted_product", worst)

    worst = 0.0
    for k in range(d):
        left = ev(Diagram.identity(d, 0).then(Cap(0)).then(Charge(0, k)))
        right = ev(Diagram.identity(d, 0).then(Cap(0)).then(Charge(1, k)))
        worst = max(worst, _mx(left - ring.zeta_pow(k * k) * right))
        upleft = ev(
            Diagram.identity(d, 2).then(Charge(0, k)).then(Cup(0))
        )
        upright = ev(
            Diagram.identity(d, 2).then(Charge(1, k)).then(Cup(0))
        )
        worst = max(worst, _mx(upleft - ring.zeta_pow(-k * k) * upright))
    res.add("string_fourier_slides", worst)

    worst = 0.0
    for base in (1, 2):
        for s in range(2 * base):
            zig = Diagram.identity(d, 2 * base).then(Cap(s)).then(Cup(s + 1))
            worst = max(worst, _mx(ev(zig) - np.eye(d**base)))
            if s >= 1:
                zag = Diagram.identity(d, 2 * base).then(Cap(s)).then(Cup(s - 1))
                worst = max(worst, _mx(ev(zag) - np.eye(d**base)))
    res.add("temperley_lieb", worst)

    res.add("resolution_of_identity", evaluator.resolution_of_identity_check(ring))
    res.add("parafermion_algebra_n2", evaluator.parafermion_relations_check(ring, 2))

    closure_pos = Diagram.identity(d, 2).then(Cap(2)).then(BraidPos(1)).then(Cup(2))
    closure_neg = Diagram.identity(d, 2).then(Cap(2)).then(BraidNeg(1)).then(Cup(2))
    r1 = max(
        _mx(ev(closure_pos) - np.eye(d) / ring.omega_sqrt),
        _mx(ev(closure_neg) - np.eye(d) * ring.omega_sqrt),
    )
    res.add("reidemeister_1", r1)

    bpos = Diagram.identity(d, 2).then(BraidPos(0))
    bneg = Diagram.identity(d, 2).then(BraidNeg(0))
    res.add("reidemeister_2", _mx(ev(compose(bneg, bpos)) - np.eye(d)))

    b0p = Diagram.identity(d, 4).then(BraidPos(0))
    b1p = Diagram.identity(d, 4).then(BraidPos(1))
    lhs = ev(compose(compose(b0p, b1p), b0p))
    rhs = ev(compose(compose(b1p, b0p), b1p))
    res.add("reidemeister_3", _mx(lhs - rhs))

    worst = 0.0
    for k in range(d):
        under = ev(Diagram.identity(d, 2).then(Charge(0, k)).then(BraidPos(0)))
        over = ev(Diagram.identity(d, 2).then(BraidPos(0)).then(Charge(1, k)))
        worst = max(worst, _mx(under - over))
    res.add("particle_braid", worst)

    res.add(
        "braid_fourier",
        max(
            _mx(ev(sft_rotate(bpos)) - ev(bneg)),
            _mx(ev(sft_rotate(bneg)) - ev(bpos)),
        ),
    )
    return res


def suite_sft(d: int, n_max: int = 3, tol: float = 1e-9) -> SuiteResult:
    """Braid-product vs closed-form SFT, rotation order, Max/GHZ forms."""
    ring = make_phase_ring(d)
    res = SuiteResult("sft", tol=tol)
    for n in range(1, n_max + 1):
        s = gates.sft_matrix(ring, n)
        res.add(f"cross_oracle_n{n}", _mx(s - evaluator.sft_via_braids(ring, n)))
        res.add(f"unitary_n{n}", _mx(s @ s.conj().T - np.eye(d**n)))
        power = np.linalg.matrix_power(s, 2 * n)
        worst = 0.0
        for ks in gates.all_digit_tuples(d, n):
            idx = gates.basis_index(ks, d)
            col = power[:, idx].copy()
            col[idx] -= ring.q_pow(sum(ks) ** 2)
            worst = max(worst, _mx(col))
        res.add(f"full_rotation_n{n}", worst)
        # charge sector preservation
        worst = 0.0
        for ks in gates.all_digit_tuples(d, n):
            for ls in gates.all_digit_tuples(d, n):
                if (sum(ks) - sum(ls)) % d != 0:
                    worst = max(
                        worst,
                        abs(s[gates.basis_index(ls, d), gates.basis_index(ks, d)]),
                    )
        res.add(f"charge_sectors_n{n}", worst)
    for n in (2, 3):
        s = gates.sft_matrix(ring, n)
        maxv = entangle.max_state(ring, n).vector
        res.add(f"max_state_n{n}", _mx(s[:, 0] - maxv))
        fs = gates.kron_all([gates.fourier_gate(ring)] * n)
        ghz = entangle.ghz_state(ring, n).vector
        res.add(f"ghz_duality_n{n}", _mx(fs @ maxv - ghz))
        res.add(
            f"ghz_duality_inv_n{n}", _mx(np.linalg.inv(fs) @ maxv - ghz)
        )
        worst = 0.0
        for ks in gates.all_digit_tuples(d, n):
            closed = entangle.max_basis(ring, ks).vector
            worst = max(worst, _mx(closed - s[:, gates.basis_index(ks, d)]))
            ghzk = entangle.ghz_basis(ring, ks).vector
            worst = max(worst, _mx(ghzk - np.linalg.inv(fs) @ closed))
        res.add(f"basis_closed_forms_n{n}", worst)
    return res


def suite_entropy(d: int, tol: float = 1e-8) -> SuiteResult:
    """Maximal entanglement of SFT images of neutral product states."""
    ring = make_phase_ring(d)
    res = SuiteResult("entropy", tol=tol)
    target = math.log(d)
    for n in (2, 3):
        s = gates.sft_matrix(ring, n)
        worst = 0.0
        for ks in gates.all_digit_tuples(d, n):
            if sum(ks) % d != 0:
                continue
            vec = gates.QState(d, n, s[:, gates.basis_index(ks, d)])
            for site in range(n):
                worst = max(
                    worst, abs(entangle.entanglement_entropy(vec, site) - target)
                )
        res.add(f"singleton_cut_entropy_n{n}", worst)
    rho = entangle.partial_trace(
        entangle.DensityMatrix.from_state(entangle.max_state(ring, 2)), (0,)
    )
    res.add("max2_reduction_uniform", _mx(rho.matrix - np.eye(d) / d))
    return res


def suite_clifford(d: int, tol: float = 1e-9) -> SuiteResult:
    ring = make_phase_ring(d)
    res = SuiteResult("clifford", tol=tol)
    r1 = cliffordmod.verify_cz_from_sft(ring)
    res.add("cz_from_sft", r1.residual)
    res.note("cz_from_sft_variant", f"{r1.alternate_residual:.6e}")
    r2 = cliffordmod.verify_sft_factorizations(ring)
    res.add("sft_factorizations", r2.residual)
    r3 = cliffordmod.verify_braid_gaussian_dressing(ring)
    res.add("braid_gaussian_dressing", r3.residual)
    res.note("braid_dressing_variant", f"{r3.alternate_residual:.6e}")
    res.note("sft_is_clifford_n1", cliffordmod.is_clifford(ring, gates.sft_matrix(ring, 1)))
    res.note("sft_is_clifford_n2", cliffordmod.is_clifford(ring, gates.sft_matrix(ring, 2)))
    if not cliffordmod.is_clifford(ring, gates.sft_matrix(ring, 2)):
        res.add("sft_clifford_flag", 1.0)
    if d == 2:
        t_gate = np.diag([1.0, np.exp(1j * np.pi / 4)])
        res.note("pi8_is_clifford", cliffordmod.is_clifford(ring, t_gate))
        if cliffordmod.is_clifford(ring, t_gate):
            res.add("pi8_flag", 1.0)
    # single-qudit group report: BFS closure of {X,Y,Z,F,G} modulo phase
    gens = {name: gates.gate_power(ring, name, 1) for name in "XYZFG"}
    group = cliffordmod.generate_group(
        ring,
        1,
        gens,
        cap=50_000,
        probes={"sft": gates.sft_matrix(ring, 1), "fourier": gates.fourier_gate(ring)},
    )
    res.note("group_n1_order", group.order)
    res.note("group_n1_generators", group.generator_count)
    res.note("group_n1_cap_hit", group.cap_hit)
    for name, flag in sorted(group.membership.items()):
        res.note(f"group_n1_contains_{name}", flag)
        if not flag:
            res.add(f"group_n1_missing_{name}", 1.0)
    return res


def suite_tricks(d: int, tol: float = 1e-9) -> SuiteResult:
    ring = make_phase_ring(d)
    res = SuiteResult("tricks", tol=tol)
    rep = gates.circuit_tricks_check(ring, np.random.default_rng(7))
    for key in sorted(rep.residuals):
        res.add(key, rep.residuals[key])
    return res


def suite_protocols(d: int, tol: float = 1e-9) -> SuiteResult:
    ring = make_phase_ring(d)
    res = SuiteResult("protocols", tol=tol)

    script = protocols.teleportation_script(ring)
    rng = np.random.default_rng(11)
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    psi = gates.QState(d, 1, v / np.linalg.norm(v))
    worst = 0.0
    total_p = 0.0
    for tr in protocols.run_branches(ring, script, psi):
        out = protocols.state_on_sites(tr.final_state, script.output_sites)
        worst = max(worst, abs(1.0 - protocols.phase_free_fidelity(out, psi)))
        total_p += tr.probability
    res.add("teleport_branch_fidelity", worst)
    res.add("teleport_probability_sum", abs(1.0 - total_p))
    tr3 = protocols.run(ring, script, psi, seed=3)
    res.note("teleport_edits", tr3.edits)
    res.note("teleport_cdits", tr3.cdits)
    if (tr3.edits, tr3.cdits) != (1, 2):
        res.add("teleport_resource_counts", 1.0)

    n = 3
    script = protocols.build_max_script(ring, n)
    target = entangle.max_state(ring, n)
    worst = 0.0
    for tr in protocols.run_branches(ring, script):
        out = protocols.state_on_sites(tr.final_state, script.output_sites)
        worst = max(worst, abs(1.0 - protocols.phase_free_fidelity(out, target)))
    res.add("build_max3_branch_fidelity", worst)
    tr = protocols.run(ring, script, seed=5)
    res.note("build_max3_edits", tr.edits)
    res.note("build_max3_cdits", tr.cdits)
    if (tr.edits, tr.cdits) != (n - 1, n - 1):
        res.add("build_max3_resource_counts", 1.0)

    script = protocols.bvk_merge_script(ring, (1, 1))
    target = entangle.max_state(ring, 2)
    worst = 0.0
    for tr in protocols.run_branches(ring, script):
        out = protocols.state_on_sites(tr.final_state, script.output_sites)
        worst = max(worst, abs(1.0 - protocols.phase_free_fidelity(out, target)))
    res.add("bvk_11_branch_fidelity", worst)
    return res


SUITES = {
    "relations": suite_relations,
    "sft": suite_sft,
    "entropy": suite_entropy,
    "clifford": suite_clifford,
    "tricks": suite_tricks,
    "protocols": suite_protocols,
}


def run_suite(name: str, d: int, tol: float, n: int | None = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(name)
    if name == "sft":
        return suite_sft(d, n_max=n or 3, tol=tol)
    if name == "entropy":
        return suite_entropy(d, tol=max(tol, 1e-8))
    return SUITES[name](d, tol=tol)
