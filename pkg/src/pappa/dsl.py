"""Text formats for diagrams (.pd), circuits (.pc) and protocols (.pp).

Diagram files: a header ``diagram d=<int> in=<int> out=<int>`` then one
layer per line; generators are ``cap@i``, ``cup@i``, ``chg@i:k:tier``,
``b+@i``, ``b-@i``, ``sym@i:m`` and ``box NAME@i:w:c``.  Strand indices
are 0-based.  ``#`` starts a comment.

Circuit files: ``circuit d=<int> n=<int>`` then statements ``gate X@2``,
``gate F^-1@1``, ``ctrl X c=1 t=2``, ``sft``, ``measure@1 -> m1`` and
``cond m1 apply Z^-m1 @3``.  Sites are 1-based.

Protocol files: ``party A: q1 q3``, ``resource max2: q2 q4``,
``input: q1``, ``gate F^-1 @q1``, ``ctrl X c=q1 t=q2``,
``meter q2 -> m1``, ``send A->B m1``, ``cond m1 apply Z^-m1 @q4``,
``output: q3 q4``.  Sites are written ``q<N>`` with N 1-based.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from . import diagrams, gates, protocols
from .diagrams import Box, BraidNeg, BraidPos, Cap, Charge, Cup, Diagram, Sym
from .gates import QState
from .phases import PhaseRing


class ParseError(Exception):
    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


def _clean_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


# ---------------------------------------------------------------------------
# diagrams
# ---------------------------------------------------------------------------

_GEN_RE = re.compile(r"^(cap|cup|b\+|b-|chg|sym)@(-?\d+)((?::-?\d+)*)$")
_BOX_RE = re.compile(r"^box\s+(\w+)@(\d+):(\d+):(-?\d+)$")


def parse_diagram(text: str, path: str = "<diagram>") -> Diagram:
    lines = list(_clean_lines(text))
    if not lines:
        raise ParseError(path, 1, "empty diagram file")
    lineno, header = lines[0]
    m = re.match(r"^diagram\s+d=(\d+)\s+in=(\d+)\s+out=(\d+)$", header)
    if not m:
        raise ParseError(path, lineno, f"bad header {header!r}")
    d, in_points, out_points = (int(g) for g in m.groups())
    layers = []
    for lineno, line in lines[1:]:
        layer = []
        for token in re.split(r"\s+", line):
            if token == "box":
                bm = _BOX_RE.match(line[line.index("box") :])
                if not bm:
                    raise ParseError(path, lineno, f"bad box {line!r}")
                layer.append(
                    Box(bm.group(1), int(bm.group(2)), int(bm.group(3)), int(bm.group(4)))
                )
                break
            gm = _GEN_RE.match(token)
            if not gm:
                raise ParseError(path, lineno, f"bad generator {token!r}")
            kind, strand = gm.group(1), int(gm.group(2))
            args = [int(a) for a in gm.group(3).split(":")[1:]] if gm.group(3) else []
            if kind == "cap":
                layer.append(Cap(strand))
            elif kind == "cup":
                layer.append(Cup(strand))
            elif kind == "b+":
                layer.append(BraidPos(strand))
            elif kind == "b-":
                layer.append(BraidNeg(strand))
            elif kind == "chg":
                if len(args) not in (1, 2):
                    raise ParseError(path, lineno, f"chg needs @i:k[:tier] in {token!r}")
                layer.append(Charge(strand, args[0], args[1] if len(args) > 1 else 0))
            elif kind == "sym":
                if len(args) != 1:
                    raise ParseError(path, lineno, f"sym needs @i:m in {token!r}")
                layer.append(Sym(strand, args[0]))
        layers.append(tuple(layer))
    try:
        return Diagram(d, in_points, out_points, tuple(layers))
    except ValueError as exc:
        raise ParseError(path, lines[-1][0], str(exc)) from exc


# ---------------------------------------------------------------------------
# circuits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CGate:
    name: str
    power: int
    site: int


@dataclass(frozen=True)
class CCtrl:
    name: str
    control: int
    target: int
    exponent: int = 1


@dataclass(frozen=True)
class CSft:
    pass


@dataclass(frozen=True)
class CMeasure:
    site: int
    register: str


@dataclass(frozen=True)
class CCond:
    register: str
    name: str
    coeff: int
    site: int


@dataclass
class Circuit:
    d: int
    n: int
    ops: list = field(default_factory=list)


_GATE_TOKEN = re.compile(r"^([XYZFG])(?:\^(-?\d+))?$")
_COND_GATE = re.compile(r"^([XYZFG])\^(-?)(?:(\d+)\*)?(\w+)$")


def _parse_gate_token(token: str, path: str, lineno: int) -> tuple[str, int]:
    m = _GATE_TOKEN.match(token)
    if not m:
        raise ParseError(path, lineno, f"bad gate token {token!r}")
    return m.group(1), int(m.group(2) or 1)


def parse_circuit(text: str, path: str = "<circuit>") -> Circuit:
    lines = list(_clean_lines(text))
    if not lines:
        raise ParseError(path, 1, "empty circuit file")
    lineno, header = lines[0]
    m = re.match(r"^circuit\s+d=(\d+)\s+n=(\d+)$", header)
    if not m:
        raise ParseError(path, lineno, f"bad header {header!r}")
    circ = Circuit(int(m.group(1)), int(m.group(2)))

    def site(tok: str, lineno: int) -> int:
        try:
            s = int(tok)
        except ValueError:
            raise ParseError(path, lineno, f"bad site {tok!r}") from None
        if not 1 <= s <= circ.n:
            raise ParseError(path, lineno, f"site {s} outside 1..{circ.n}")
        return s - 1

    for lineno, line in lines[1:]:
        if line == "sft":
            circ.ops.append(CSft())
            continue
        m = re.match(r"^gate\s+(\S+)@(\d+)$", line)
        if m:
            name, power = _parse_gate_token(m.group(1), path, lineno)
            circ.ops.append(CGate(name, power, site(m.group(2), lineno)))
            continue
        m = re.match(r"^ctrl\s+(\S+)\s+c=(\d+)\s+t=(\d+)$", line)
        if m:
            name, power = _parse_gate_token(m.group(1), path, lineno)
            circ.ops.append(
                CCtrl(name, site(m.group(2), lineno), site(m.group(3), lineno), power)
            )
            continue
        m = re.match(r"^measure@(\d+)\s*->\s*(\w+)$", line)
        if m:
            circ.ops.append(CMeasure(site(m.group(1), lineno), m.group(2)))
            continue
        m = re.match(r"^cond\s+(\w+)\s+apply\s+(\S+)\s*@(\d+)$", line)
        if m:
            reg, gate_tok = m.group(1), m.group(2)
            gm = _COND_GATE.match(gate_tok)
            if not gm or gm.group(4) != reg:
                raise ParseError(
                    path, lineno, f"conditional gate {gate_tok!r} must use register {reg!r}"
                )
            coeff = int(gm.group(3) or 1) * (-1 if gm.group(2) == "-" else 1)
            circ.ops.append(CCond(reg, gm.group(1), coeff, site(m.group(3), lineno)))
            continue
        raise ParseError(path, lineno, f"unrecognized statement {line!r}")
    return circ


def run_circuit(
    ring: PhaseRing, circ: Circuit, state: QState | None = None, seed: int | None = 0
) -> tuple[QState, dict[str, int]]:
    """Run a parsed circuit from |0...0> (or ``state``); returns (state, outcomes)."""
    if ring.d != circ.d:
        raise ValueError("ring degree and circuit degree differ")
    rng = np.random.default_rng(seed)
    st = state.copy() if state is not None else QState.zero(circ.d, circ.n)
    regs: dict[str, int] = {}
    for op in circ.ops:
        if isinstance(op, CGate):
            st = gates.apply_gate_spec(
                ring, st, gates.GateSpec(op.name, (op.site,), op.power)
            )
        elif isinstance(op, CCtrl):
            st = gates.apply_gate_spec(
                ring,
                st,
                gates.GateSpec(
                    "ctrl", (op.control, op.target), op.exponent, base=op.name
                ),
            )
        elif isinstance(op, CSft):
            st = gates.apply_gate_spec(ring, st, gates.GateSpec("sft"))
        elif isinstance(op, CMeasure):
            outcome, st, _ = gates.measure(st, op.site, rng)
            regs[op.register] = int(outcome)
        elif isinstance(op, CCond):
            power = op.coeff * regs[op.register]
            if power:
                st = gates.apply_gate_spec(
                    ring, st, gates.GateSpec(op.name, (op.site,), power)
                )
    return st, regs


# ---------------------------------------------------------------------------
# protocols
# ---------------------------------------------------------------------------


def _q(tok: str, path: str, lineno: int) -> int:
    m = re.match(r"^q(\d+)$", tok)
    if not m:
        raise ParseError(path, lineno, f"bad site token {tok!r} (want qN)")
    return int(m.group(1)) - 1


def parse_protocol(text: str, d: int, path: str = "<protocol>") -> protocols.ProtocolScript:
    parties: dict[str, tuple[int, ...]] = {}
    resources: list[protocols.Resource] = []
    steps: list[protocols.Step] = []
    input_sites: tuple[int, ...] = ()
    output_sites: tuple[int, ...] = ()
    owner: dict[int, str] = {}

    def party_of(site: int, lineno: int) -> str:
        if site not in owner:
            raise ParseError(path, lineno, f"site q{site + 1} not owned by any party")
        return owner[site]

    for lineno, line in _clean_lines(text):
        m = re.match(r"^party\s+(\w+)\s*:\s*(.+)$", line)
        if m:
            sites = tuple(_q(tok, path, lineno) for tok in m.group(2).split())
            parties[m.group(1)] = sites
            for s in sites:
                owner[s] = m.group(1)
            continue
        m = re.match(r"^resource\s+max(\d+)\s*:\s*(.+)$", line)
        if m:
            sites = tuple(_q(tok, path, lineno) for tok in m.group(2).split())
            if len(sites) != int(m.group(1)):
                raise ParseError(path, lineno, "resource arity does not match sites")
            resources.append(protocols.Resource(sites))
            continue
        m = re.match(r"^input\s*:\s*(.+)$", line)
        if m:
            input_sites = tuple(_q(tok, path, lineno) for tok in m.group(1).split())
            continue
        m = re.match(r"^output\s*:\s*(.+)$", line)
        if m:
            output_sites = tuple(_q(tok, path, lineno) for tok in m.group(1).split())
            continue
        m = re.match(r"^gate\s+(\S+)\s*@(q\d+)$", line)
        if m:
            name, power = _parse_gate_token(m.group(1), path, lineno)
            site = _q(m.group(2), path, lineno)
            steps.append(protocols.GateStep(party_of(site, lineno), name, site, power))
            continue
        m = re.match(r"^ctrl\s+(\S+)\s+c=(q\d+)\s+t=(q\d+)$", line)
        if m:
            name, power = _parse_gate_token(m.group(1), path, lineno)
            c = _q(m.group(2), path, lineno)
            t = _q(m.group(3), path, lineno)
            steps.append(
                protocols.CtrlStep(party_of(c, lineno), name, c, t, power)
            )
            continue
        m = re.match(r"^meter\s+(q\d+)\s*->\s*(\w+)$", line)
        if m:
            site = _q(m.group(1), path, lineno)
            steps.append(
                protocols.MeasureStep(party_of(site, lineno), site, m.group(2))
            )
            continue
        m = re.match(r"^send\s+(\w+)\s*->\s*(\w+)\s+(\w+)$", line)
        if m:
            steps.append(protocols.SendStep(m.group(1), m.group(2), m.group(3)))
            continue
        m = re.match(r"^cond\s+(\w+)\s+apply\s+(\S+)\s*@(q\d+)$", line)
        if m:
            reg, gate_tok = m.group(1), m.group(2)
            gm = _COND_GATE.match(gate_tok)
            if not gm or gm.group(4) != reg:
                raise ParseError(
                    path, lineno, f"conditional gate {gate_tok!r} must use register {reg!r}"
                )
            coeff = int(gm.group(3) or 1) * (-1 if gm.group(2) == "-" else 1)
            site = _q(m.group(3), path, lineno)
            steps.append(
                protocols.CondStep(party_of(site, lineno), gm.group(1), site, reg, coeff)
            )
            continue
        raise ParseError(path, lineno, f"unrecognized statement {line!r}")
    n_sites = max(owner) + 1 if owner else 0
    if set(owner) != set(range(n_sites)):
        raise ParseError(path, 1, "party sites must cover q1..qN without gaps")
    return protocols.ProtocolScript(
        d=d,
        n_sites=n_sites,
        parties=parties,
        resources=resources,
        steps=steps,
        input_sites=input_sites,
        output_sites=output_sites,
    )


def format_diagram(diagram: Diagram) -> str:
    """Render a diagram back into the .pd text form."""
    out = [f"diagram d={diagram.d} in={diagram.in_points} out={diagram.out_points}"]
    for layer in diagram.layers:
        toks = []
        for gen in layer:
            if isinstance(gen, Cap):
                toks.append(f"cap@{gen.strand}")
            elif isinstance(gen, Cup):
                toks.append(f"cup@{gen.strand}")
            elif isinstance(gen, BraidPos):
                toks.append(f"b+@{gen.strand}")
            elif isinstance(gen, BraidNeg):
                toks.append(f"b-@{gen.strand}")
            elif isinstance(gen, Charge):
                toks.append(f"chg@{gen.strand}:{gen.k}:{gen.tier}")
            elif isinstance(gen, Sym):
                toks.append(f"sym@{gen.strand}:{gen.m}")
            elif isinstance(gen, Box):
                toks.append(f"box {gen.name}@{gen.first}:{gen.strands}:{gen.charge}")
        out.append(" ".join(toks))
    return "\n".join(out) + "\n"
