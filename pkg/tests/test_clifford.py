"""Clifford identities, group generation by BFS, and membership testing."""

import numpy as np
import pytest

from pappa import gates
from pappa.clifford import (
    PhaselessUnitary,
    generate_group,
    is_clifford,
    verify_braid_gaussian_dressing,
    verify_cz_from_sft,
    verify_sft_factorizations,
)
from pappa.gates import (
    cz_gate,
    embed_site_matrix,
    fourier_gate,
    gaussian_gate,
    pauli_gate,
    sft_matrix,
)
from pappa.phases import make_phase_ring

RINGS = {d: make_phase_ring(d) for d in (2, 3, 5)}


@pytest.mark.parametrize("d", [2, 3, 5])
def test_cz_from_sft_identity(d):
    rep = verify_cz_from_sft(RINGS[d])
    assert rep.residual < 1e-9
    # the rejected variant dressing is recorded and indeed fails
    assert rep.alternate_residual > 1e-3


@pytest.mark.parametrize("d", [2, 3, 5])
def test_sft_factorization_identities(d):
    rep = verify_sft_factorizations(RINGS[d])
    assert rep.residual < 1e-9
    assert rep.extras["factorization1"] < 1e-9
    assert rep.extras["factorization2"] < 1e-9
    assert rep.extras["bell_corollary"] < 1e-9


def test_bell_corollary_reproduces_bell_state_d2():
    ring = RINGS[2]
    x = pauli_gate(ring, "X")
    c1x = gates.controlled_gate(ring, 2, 0, 1, x)
    zero = np.zeros(4)
    zero[0] = 1.0
    got = np.linalg.inv(c1x) @ gates.kron_all([fourier_gate(ring), np.eye(2)]) @ zero
    bell = np.array([2**-0.5, 0, 0, 2**-0.5])
    assert np.abs(got - bell).max() < 1e-12


@pytest.mark.parametrize("d", [2, 3, 5])
def test_braid_clifford_identity(d):
    rep = verify_braid_gaussian_dressing(RINGS[d])
    assert rep.residual < 1e-9
    assert rep.extras["inverse_pair"] < 1e-9
    assert rep.alternate_residual > 1e-3


def test_canonicalization_kills_global_phase():
    rng = np.random.default_rng(3)
    u = gates._random_unitary(4, rng)
    for theta in rng.uniform(0, 2 * np.pi, size=8):
        a = PhaselessUnitary.of(u)
        b = PhaselessUnitary.of(np.exp(1j * theta) * u)
        assert np.abs(a.matrix - b.matrix).max() < 1e-9
        assert a.key() == b.key()
    # idempotent
    again = PhaselessUnitary.of(PhaselessUnitary.of(u).matrix)
    assert np.abs(again.matrix - PhaselessUnitary.of(u).matrix).max() < 1e-12


def _single_qudit_generators(ring, n):
    gens = {}
    for site in range(n):
        for name in "XYZFG":
            gens[f"{name}{site}"] = embed_site_matrix(
                ring.d, n, site, gates.gate_power(ring, name, 1)
            )
    return gens


def test_group_order_self_consistent_under_permutation():
    """BFS order for the 1-qubit group is its own oracle: rerun permuted."""
    ring = RINGS[2]
    gens = _single_qudit_generators(ring, 1)
    rep1 = generate_group(ring, 1, gens, cap=10_000)
    permuted = dict(reversed(list(gens.items())))
    rep2 = generate_group(ring, 1, permuted, cap=10_000)
    assert not rep1.cap_hit and not rep2.cap_hit
    assert rep1.order == rep2.order
    # F and G are themselves reachable (they are generators), SFT = G
    probe = generate_group(
        ring,
        1,
        gens,
        cap=10_000,
        probes={"sft": sft_matrix(ring, 1), "fourier": fourier_gate(ring)},
    )
    assert probe.membership["sft"] and probe.membership["fourier"]


def test_closure_is_a_group_spot_check():
    """Products of random closure elements stay in the closure."""
    ring = RINGS[2]
    gens = _single_qudit_generators(ring, 1)
    rep = generate_group(ring, 1, gens, cap=10_000)
    # regenerate the set to sample elements
    keys = set()
    frontier = [np.eye(2, dtype=complex)]
    seen = [np.eye(2, dtype=complex)]
    keys.add(PhaselessUnitary.of(np.eye(2, dtype=complex)).key())
    while frontier:
        cur = frontier.pop()
        for g in gens.values():
            nxt = PhaselessUnitary.of(g @ cur)
            if nxt.key() not in keys:
                keys.add(nxt.key())
                seen.append(nxt.matrix)
                frontier.append(nxt.matrix)
    assert len(keys) == rep.order
    rng = np.random.default_rng(0)
    for _ in range(25):
        a = seen[rng.integers(len(seen))]
        b = seen[rng.integers(len(seen))]
        assert PhaselessUnitary.of(a @ b).key() in keys
        assert PhaselessUnitary.of(np.linalg.inv(a)).key() in keys


def test_cz_in_two_qudit_closure_d2():
    """X,Y,Z,F,G on both qubits plus the SFT generate C_Z."""
    ring = RINGS[2]
    gens = _single_qudit_generators(ring, 2)
    gens["sft"] = sft_matrix(ring, 2)
    rep = generate_group(
        ring,
        2,
        gens,
        cap=30_000,
        probes={
            "cz": cz_gate(ring, 2),
            "cnot": gates.controlled_gate(ring, 2, 0, 1, pauli_gate(ring, "X")),
        },
    )
    assert rep.membership["cz"]
    assert rep.membership["cnot"]


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("n", [1, 2])
def test_sft_is_clifford(d, n):
    ring = RINGS[d]
    assert is_clifford(ring, sft_matrix(ring, n))


def test_pi8_gate_is_not_clifford():
    ring = RINGS[2]
    t = np.diag([1.0, np.exp(1j * np.pi / 4)])
    assert not is_clifford(ring, t)


def test_identity_is_clifford():
    for d in (2, 3):
        for n in (1, 2):
            assert is_clifford(RINGS[d], np.eye(d**n, dtype=complex))


def test_is_clifford_rejects_non_unitary():
    with pytest.raises(ValueError):
        is_clifford(RINGS[2], np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex))


def test_named_gates_are_clifford():
    for d in (2, 3):
        ring = RINGS[d]
        for name in "XYZFG":
            assert is_clifford(ring, gates.gate_power(ring, name, 1)), name
        assert is_clifford(ring, cz_gate(ring, 2))
