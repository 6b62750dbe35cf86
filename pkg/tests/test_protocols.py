"""Protocols: teleportation, resource distillation, multipartite merging."""

import numpy as np
import pytest

from pappa import protocols
from pappa.diagrams import Charge, Cup, Diagram
from pappa.entangle import max_state
from pappa.evaluator import evaluate
from pappa.gates import QState
from pappa.phases import make_phase_ring
from pappa.protocols import (
    CondStep,
    CtrlStep,
    GateStep,
    LocalityError,
    MeasureStep,
    ProtocolScript,
    Resource,
    SendStep,
    build_max_script,
    bvk_merge_script,
    phase_free_fidelity,
    phase_space_measurement,
    run,
    run_branches,
    state_on_sites,
    teleportation_script,
)

RINGS = {d: make_phase_ring(d) for d in (2, 3, 5)}


def rand_state(d, n, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=d**n) + 1j * rng.normal(size=d**n)
    return QState(d, n, v / np.linalg.norm(v))


def test_empty_script_passthrough():
    ring = RINGS[2]
    script = ProtocolScript(
        d=2,
        n_sites=1,
        parties={"a": (0,)},
        resources=[],
        steps=[],
        input_sites=(0,),
        output_sites=(0,),
    )
    psi = rand_state(2, 1, 0)
    tr = run(ring, script, psi, seed=1)
    assert tr.edits == 0 and tr.cdits == 0
    assert np.abs(tr.final_state.vector - psi.vector).max() < 1e-12


def test_teleport_plus_state_all_branches_d2():
    ring = RINGS[2]
    script = teleportation_script(ring)
    plus = QState(2, 1, np.array([1, 1]) / 2**0.5)
    branches = run_branches(ring, script, plus)
    assert len(branches) == 4
    for tr in branches:
        assert abs(tr.probability - 0.25) < 1e-12
        out = state_on_sites(tr.final_state, script.output_sites)
        assert abs(1 - phase_free_fidelity(out, plus)) < 1e-9


@pytest.mark.parametrize("d", [2, 3, 5])
def test_teleport_every_branch_every_d(d):
    ring = RINGS[d]
    script = teleportation_script(ring)
    psi = rand_state(d, 1, 42)
    total = 0.0
    for tr in run_branches(ring, script, psi):
        out = state_on_sites(tr.final_state, script.output_sites)
        assert abs(1 - phase_free_fidelity(out, psi)) < 1e-9
        total += tr.probability
    assert abs(total - 1) < 1e-12


def test_teleport_seeded_runs_d3():
    ring = RINGS[3]
    script = teleportation_script(ring)
    for seed in range(100):
        psi = rand_state(3, 1, seed + 1000)
        tr = run(ring, script, psi, seed=seed)
        out = state_on_sites(tr.final_state, script.output_sites)
        assert abs(1 - phase_free_fidelity(out, psi)) < 1e-9
        assert tr.edits == 1 and tr.cdits == 2


def test_teleport_transcript_replay():
    ring = RINGS[3]
    script = teleportation_script(ring)
    psi = rand_state(3, 1, 7)
    a = run(ring, script, psi, seed=99)
    b = run(ring, script, psi, seed=99)
    assert a.outcomes == b.outcomes
    assert np.abs(a.final_state.vector - b.final_state.vector).max() == 0.0


def test_build_max_degenerate_two_parties():
    ring = RINGS[3]
    script = build_max_script(ring, 2)
    tr = run(ring, script, seed=0)
    assert tr.edits == 1 and tr.cdits == 0
    out = state_on_sites(tr.final_state, script.output_sites)
    assert abs(1 - phase_free_fidelity(out, max_state(ring, 2))) < 1e-12


@pytest.mark.parametrize("d,n", [(2, 3), (3, 3), (2, 4)])
def test_build_max_branch_exhaustive(d, n):
    ring = RINGS[d]
    script = build_max_script(ring, n)
    target = max_state(ring, n)
    total = 0.0
    for tr in run_branches(ring, script):
        out = state_on_sites(tr.final_state, script.output_sites)
        assert abs(1 - phase_free_fidelity(out, target)) < 1e-9
        total += tr.probability
    assert abs(total - 1) < 1e-10
    tr = run(ring, script, seed=1)
    assert tr.edits == n - 1
    assert tr.cdits == n - 1


def test_build_max_n4_d3_counts():
    ring = RINGS[3]
    script = build_max_script(ring, 4)
    tr = run(ring, script, seed=2)
    assert (tr.edits, tr.cdits) == (3, 3)
    out = state_on_sites(tr.final_state, script.output_sites)
    assert abs(1 - phase_free_fidelity(out, max_state(ring, 4))) < 1e-9


def test_bvk_smallest_instance():
    for d in (2, 3):
        ring = RINGS[d]
        script = bvk_merge_script(ring, (1, 1))
        target = max_state(ring, 2)
        for tr in run_branches(ring, script):
            out = state_on_sites(tr.final_state, script.output_sites)
            assert abs(1 - phase_free_fidelity(out, target)) < 1e-9
        assert run(ring, script, seed=0).cdits == 2


@pytest.mark.parametrize("d,sizes", [(2, (2, 2)), (2, (1, 2)), (3, (2, 1)), (2, (1, 1, 1))])
def test_bvk_merge_branch_exhaustive(d, sizes):
    ring = RINGS[d]
    script = bvk_merge_script(ring, sizes)
    target = max_state(ring, sum(sizes))
    total = 0.0
    for tr in run_branches(ring, script):
        out = state_on_sites(tr.final_state, script.output_sites)
        assert abs(1 - phase_free_fidelity(out, target)) < 1e-9, (d, sizes)
        total += tr.probability
    assert abs(total - 1) < 1e-10
    assert run(ring, script, seed=0).cdits == len(sizes)


def test_bvk_global_phase_factor_is_global_per_branch():
    """Each branch equals Max up to one overall phase (not per-component)."""
    ring = RINGS[3]
    script = bvk_merge_script(ring, (2, 1))
    target = max_state(ring, 3)
    for tr in run_branches(ring, script):
        out = state_on_sites(tr.final_state, script.output_sites)
        v = out.vector / np.linalg.norm(out.vector)
        overlap = np.vdot(target.vector, v)
        assert np.abs(v - overlap * target.vector).max() < 1e-9


def test_bvk_rejects_bad_sizes():
    with pytest.raises(ValueError):
        bvk_merge_script(RINGS[2], (2,))
    with pytest.raises(ValueError):
        bvk_merge_script(RINGS[2], (0, 2))


def test_locality_enforced_on_gates():
    ring = RINGS[2]
    script = ProtocolScript(
        d=2,
        n_sites=2,
        parties={"a": (0,), "b": (1,)},
        resources=[],
        steps=[CtrlStep("a", "X", control=0, target=1)],
        input_sites=(0, 1),
    )
    with pytest.raises(LocalityError):
        run(ring, script, rand_state(2, 2, 0), seed=0)


def test_locality_enforced_on_conditions():
    ring = RINGS[2]
    steps = [
        MeasureStep("a", 0, "m"),
        CondStep("b", "X", site=1, register="m"),  # never sent to b
    ]
    script = ProtocolScript(
        d=2,
        n_sites=2,
        parties={"a": (0,), "b": (1,)},
        resources=[],
        steps=steps,
        input_sites=(0, 1),
    )
    with pytest.raises(LocalityError):
        run(ring, script, rand_state(2, 2, 1), seed=0)
    # inserting the send step makes it legal
    steps.insert(1, SendStep("a", "b", "m"))
    tr = run(ring, script, rand_state(2, 2, 1), seed=0)
    assert tr.cdits == 1


def test_send_requires_known_register():
    ring = RINGS[2]
    script = ProtocolScript(
        d=2,
        n_sites=2,
        parties={"a": (0,), "b": (1,)},
        resources=[],
        steps=[SendStep("a", "b", "nope")],
        input_sites=(0, 1),
    )
    with pytest.raises(LocalityError):
        run(ring, script, rand_state(2, 2, 2), seed=0)


def test_same_party_send_is_free():
    ring = RINGS[2]
    script = ProtocolScript(
        d=2,
        n_sites=1,
        parties={"a": (0,)},
        resources=[],
        steps=[MeasureStep("a", 0, "m"), SendStep("a", "a", "m")],
        input_sites=(0,),
    )
    assert run(ring, script, rand_state(2, 1, 3), seed=0).cdits == 0


@pytest.mark.parametrize("d", [2, 3, 5])
def test_phase_space_measurement_matches_dual_diagram(d):
    """Branch probabilities equal the charged double-cup evaluations."""
    ring = RINGS[d]
    psi = rand_state(d, 2, 31)
    probs = {}
    for tr in run_branches(ring, phase_space_measurement(ring, 1), psi):
        probs[(tr.outcomes["l1"], tr.outcomes["l2"])] = tr.probability
    for l1 in range(d):
        for l2 in range(d):
            dia = (
                Diagram.identity(d, 4)
                .then(Charge(3, -(l1 + l2), 1))
                .then(Charge(2, l1, 0))
                .then(Cup(1))
                .then(Cup(0))
            )
            bra = evaluate(ring, dia).matrix
            p = float(abs((bra @ psi.vector)[0]) ** 2) / d
            assert abs(p - probs.get((l1, l2), 0.0)) < 1e-10


def test_phase_space_measurement_first_marginal_uniform():
    """On a product basis state the first meter is uniformly distributed."""
    for d in (2, 3):
        ring = RINGS[d]
        for k1 in range(d):
            for k2 in range(d):
                psi = QState.basis(d, 2, (k1, k2))
                marg = {}
                for tr in run_branches(ring, phase_space_measurement(ring, 1), psi):
                    l1 = tr.outcomes["l1"]
                    marg[l1] = marg.get(l1, 0.0) + tr.probability
                for l1 in range(d):
                    assert abs(marg.get(l1, 0.0) - 1 / d) < 1e-10


def test_phase_space_variants_same_measurement():
    """Variant 2 realizes the same outcome family (labels transposed)."""
    for d in (2, 3):
        ring = RINGS[d]
        psi = rand_state(d, 2, 5)
        p1, p2 = {}, {}
        for variant, store in ((1, p1), (2, p2)):
            for tr in run_branches(ring, phase_space_measurement(ring, variant), psi):
                store[(tr.outcomes["l1"], tr.outcomes["l2"])] = tr.probability
        for a in range(d):
            for b in range(d):
                assert abs(p2.get((a, b), 0.0) - p1.get((b, a), 0.0)) < 1e-10


def test_phase_space_applied_to_max2():
    """On Max_2 the outcomes have the l-structure of the charged double cup."""
    for d in (2, 3):
        ring = RINGS[d]
        psi = max_state(ring, 2)
        for tr in run_branches(ring, phase_space_measurement(ring, 1), psi):
            l1, l2 = tr.outcomes["l1"], tr.outcomes["l2"]
            dia = (
                Diagram.identity(d, 4)
                .then(Charge(3, -(l1 + l2), 1))
                .then(Charge(2, l1, 0))
                .then(Cup(1))
                .then(Cup(0))
            )
            bra = evaluate(ring, dia).matrix
            p = float(abs((bra @ psi.vector)[0]) ** 2) / d
            assert abs(p - tr.probability) < 1e-10


def test_branch_probabilities_match_sampling_frequencies():
    ring = RINGS[2]
    script = teleportation_script(ring)
    psi = rand_state(2, 1, 8)
    expect = {}
    for tr in run_branches(ring, script, psi):
        expect[tuple(sorted(tr.outcomes.items()))] = tr.probability
    counts = {}
    for seed in range(400):
        tr = run(ring, script, psi, seed=seed)
        key = tuple(sorted(tr.outcomes.items()))
        counts[key] = counts.get(key, 0) + 1
    for key, p in expect.items():
        assert abs(counts.get(key, 0) / 400 - p) < 0.1


def test_validate_rejects_overlapping_parties():
    with pytest.raises(ValueError):
        ProtocolScript(
            d=2,
            n_sites=2,
            parties={"a": (0, 1), "b": (1,)},
            resources=[],
            steps=[],
        ).validate()


def test_phase_space_full_forms_match_simplified():
    """The dressed long forms equal the simplified ones up to relabeling.

    The Gaussians commute through the controls and drop at the meters;
    the trailing inverse controlled gate shifts the second outcome by the
    first: p_full(l1, l2) == p_simple(l1, l2 + l1).
    """
    for d in (2, 3):
        ring = RINGS[d]
        psi = rand_state(d, 2, 77)
        for variant in (1, 2):
            p_simple, p_full = {}, {}
            for simplified, store in ((True, p_simple), (False, p_full)):
                script = phase_space_measurement(ring, variant, simplified=simplified)
                for tr in run_branches(ring, script, psi):
                    store[(tr.outcomes["l1"], tr.outcomes["l2"])] = tr.probability
            for l1 in range(d):
                for l2 in range(d):
                    if variant == 1:
                        simple_key = (l1, (l2 + l1) % d)
                    else:
                        simple_key = ((l1 + l2) % d, l2)
                    assert (
                        abs(p_full.get((l1, l2), 0.0) - p_simple.get(simple_key, 0.0))
                        < 1e-10
                    ), (d, variant, l1, l2)
