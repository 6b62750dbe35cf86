"""Braids: unitarity, Reidemeister moves, particle passage, b_m family."""

import numpy as np
import pytest

from pappa import evaluator, gates
from pappa.diagrams import (
    BraidNeg,
    BraidPos,
    Cap,
    Charge,
    Cup,
    Diagram,
    Sym,
    compose,
    sft_rotate,
)
from pappa.evaluator import braid_op, evaluate
from pappa.gates import gaussian_gate, sym_gate_matrix
from pappa.phases import make_phase_ring

RINGS = {d: make_phase_ring(d) for d in (2, 3, 4, 5)}


def mx(a):
    return float(np.abs(a).max())


def ev(ring, dia):
    return evaluate(ring, dia).matrix


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_braid_unitary_and_inverse(d):
    ring = RINGS[d]
    for n, s in ((1, 0), (2, 0), (2, 1), (2, 2)):
        bp = braid_op(ring, n, s, +1).matrix
        bn = braid_op(ring, n, s, -1).matrix
        eye = np.eye(ring.d**n)
        assert mx(bp @ bp.conj().T - eye) < 1e-10
        assert mx(bp @ bn - eye) < 1e-10
        assert mx(bp.conj().T - bn) < 1e-10


@pytest.mark.parametrize("d", [2, 3, 5])
def test_aligned_braid_is_gaussian(d):
    """On a qudit pair the negative braid is omega**-0.5 G."""
    ring = RINGS[d]
    g = gaussian_gate(ring)
    bn = braid_op(ring, 1, 0, -1).matrix
    bp = braid_op(ring, 1, 0, +1).matrix
    assert mx(bn - g / ring.omega_sqrt) < 1e-12
    assert mx(bp - ring.omega_sqrt * np.linalg.inv(g)) < 1e-12


def test_intra_qudit_braid_spec_example_d2():
    ring = RINGS[2]
    bn = braid_op(ring, 1, 0, -1).matrix
    assert mx(ring.omega_sqrt * bn - gaussian_gate(ring)) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_reidemeister_one_twists(d):
    """Closing one side of a braid yields the twist scalars omega**-+0.5."""
    ring = RINGS[d]
    pos = Diagram.identity(d, 2).then(Cap(2)).then(BraidPos(1)).then(Cup(2))
    neg = Diagram.identity(d, 2).then(Cap(2)).then(BraidNeg(1)).then(Cup(2))
    eye = np.eye(d)
    assert mx(ev(ring, pos) - eye / ring.omega_sqrt) < 1e-10
    assert mx(ev(ring, neg) - eye * ring.omega_sqrt) < 1e-10
    # closures on the other side give the same scalars
    pos_l = Diagram.identity(d, 2).then(Cap(0)).then(BraidPos(1)).then(Cup(0))
    assert mx(ev(ring, pos_l) - eye / ring.omega_sqrt) < 1e-10


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_reidemeister_two_three(d):
    ring = RINGS[d]
    bpos = Diagram.identity(d, 2).then(BraidPos(0))
    bneg = Diagram.identity(d, 2).then(BraidNeg(0))
    assert mx(ev(ring, compose(bneg, bpos)) - np.eye(d)) < 1e-10
    b0 = Diagram.identity(d, 4).then(BraidPos(0))
    b1 = Diagram.identity(d, 4).then(BraidPos(1))
    lhs = ev(ring, compose(compose(b0, b1), b0))
    rhs = ev(ring, compose(compose(b1, b0), b1))
    assert mx(lhs - rhs) < 1e-9
    # Yang-Baxter at the next strand pair too
    b2 = Diagram.identity(d, 4).then(BraidPos(2))
    lhs = ev(ring, compose(compose(b1, b2), b1))
    rhs = ev(ring, compose(compose(b2, b1), b2))
    assert mx(lhs - rhs) < 1e-9


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_particle_braid_relation(d):
    """A charge passes freely under the braid to the other strand."""
    ring = RINGS[d]
    for k in range(d):
        under = ev(ring, Diagram.identity(d, 2).then(Charge(0, k)).then(BraidPos(0)))
        over = ev(ring, Diagram.identity(d, 2).then(BraidPos(0)).then(Charge(1, k)))
        assert mx(under - over) < 1e-10
        under = ev(ring, Diagram.identity(d, 2).then(Charge(1, k)).then(BraidNeg(0)))
        over = ev(ring, Diagram.identity(d, 2).then(BraidNeg(0)).then(Charge(0, k)))
        assert mx(under - over) < 1e-10


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_braid_fourier_relation(d):
    """The boundary rotation of the positive braid is the negative braid."""
    ring = RINGS[d]
    bpos = Diagram.identity(d, 2).then(BraidPos(0))
    bneg = Diagram.identity(d, 2).then(BraidNeg(0))
    assert mx(ev(ring, sft_rotate(bpos)) - ev(ring, bneg)) < 1e-10
    assert mx(ev(ring, sft_rotate(bneg)) - ev(ring, bpos)) < 1e-10


@pytest.mark.parametrize("d", [2, 3, 5])
def test_cable_braid_is_b_family(d):
    """Crossing two qudit cables realizes b_-1 (positive) and b_1 (negative)."""
    ring = RINGS[d]
    for sign, m in ((+1, -1), (-1, +1)):
        cable = np.eye(d * d, dtype=complex)
        for s in (1, 0, 2, 1):
            cable = evaluator._braid_matrix(ring, 2, s, sign) @ cable
        assert mx(cable - sym_gate_matrix(ring, m)) < 1e-10


def test_braid_strand_range():
    with pytest.raises(ValueError):
        braid_op(RINGS[2], 1, 1, +1)


@pytest.mark.parametrize("d", [2, 3])
def test_sym_diagram_generator_matches_gate(d):
    ring = RINGS[d]
    for m in range(d):
        dia = Diagram.identity(d, 4).then(Sym(1, m))
        assert mx(ev(ring, dia) - sym_gate_matrix(ring, m)) < 1e-12
