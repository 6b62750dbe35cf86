"""Multi-party protocols: teleportation, resource-state merging, and the
generalized multipartite merge, with edit/cdit accounting.

A script owns a global register of qudit sites partitioned among named
parties.  Every quantum step must stay inside one party's sites, and a
classically controlled correction may only key on a register its party
has measured itself or received over a classical channel.  One pre-shared
entangled resource costs one edit; one cross-party classical message
costs one cdit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import entangle, gates
from .gates import QState
from .phases import PhaseRing


class LocalityError(Exception):
    """A step tried to act outside its party's sites or registers."""


# ---------------------------------------------------------------------------
# script structure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GateStep:
    party: str
    name: str  # X, Y, Z, F, G
    site: int
    power: int = 1


@dataclass(frozen=True)
class CtrlStep:
    """Apply gate**(exponent * value(control)) to target (both quantum)."""

    party: str
    name: str
    control: int
    target: int
    exponent: int = 1


@dataclass(frozen=True)
class MeasureStep:
    party: str
    site: int
    register: str


@dataclass(frozen=True)
class SendStep:
    src: str
    dst: str
    register: str


@dataclass(frozen=True)
class CondStep:
    """Apply gate**(coeff * registers value) to one site."""

    party: str
    name: str
    site: int
    register: str
    coeff: int = 1


Step = GateStep | CtrlStep | MeasureStep | SendStep | CondStep


@dataclass(frozen=True)
class Resource:
    """A pre-shared |Max>_k resource on the given (global) sites."""

    sites: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.sites)


@dataclass
class ProtocolScript:
    d: int
    n_sites: int
    parties: dict[str, tuple[int, ...]]
    resources: list[Resource]
    steps: list[Step]
    input_sites: tuple[int, ...] = ()
    # sites that remain unmeasured protocol carriers at the end
    output_sites: tuple[int, ...] = ()

    def validate(self) -> None:
        owned = {}
        for name, sites in self.parties.items():
            for s in sites:
                if s in owned:
                    raise ValueError(f"site {s} owned by {owned[s]} and {name}")
                owned[s] = name
        if set(owned) != set(range(self.n_sites)):
            raise ValueError("party sites must partition the register")
        known: dict[str, set[str]] = {p: set() for p in self.parties}
        for step in self.steps:
            if isinstance(step, GateStep):
                self._check_sites(step.party, (step.site,))
            elif isinstance(step, CtrlStep):
                self._check_sites(step.party, (step.control, step.target))
            elif isinstance(step, MeasureStep):
                self._check_sites(step.party, (step.site,))
                known[step.party].add(step.register)
            elif isinstance(step, SendStep):
                if step.register not in known[step.src]:
                    raise LocalityError(
                        f"{step.src} cannot send unknown register {step.register}"
                    )
                known[step.dst].add(step.register)
            elif isinstance(step, CondStep):
                self._check_sites(step.party, (step.site,))
                if step.register not in known[step.party]:
                    raise LocalityError(
                        f"{step.party} conditions on unreceived register "
                        f"{step.register}"
                    )

    def _check_sites(self, party: str, sites) -> None:
        if party not in self.parties:
            raise LocalityError(f"unknown party {party}")
        mine = set(self.parties[party])
        for s in sites:
            if s not in mine:
                raise LocalityError(f"site {s} is not local to party {party}")


@dataclass
class Transcript:
    seed: int | None
    outcomes: dict[str, int]
    final_state: QState
    edits: int
    cdits: int
    probability: float = 1.0
    snapshots: list[QState] | None = None


# ---------------------------------------------------------------------------
# executor
# ---------------------------------------------------------------------------


def _initial_state(
    ring: PhaseRing, script: ProtocolScript, input_state: QState | None
) -> QState:
    d, total = ring.d, script.n_sites
    blocks: list[tuple[tuple[int, ...], np.ndarray]] = []
    used: set[int] = set()
    if script.input_sites:
        if input_state is None:
            raise ValueError("script expects an input state")
        if input_state.n != len(script.input_sites):
            raise ValueError("input state size mismatch")
        blocks.append((script.input_sites, input_state.vector))
        used.update(script.input_sites)
    elif input_state is not None:
        raise ValueError("script takes no input state")
    for res in script.resources:
        blocks.append((res.sites, entangle.max_state(ring, res.k).vector))
        used.update(res.sites)
    rest = tuple(s for s in range(total) if s not in used)
    if rest:
        zero = np.zeros(d ** len(rest))
        zero[0] = 1.0
        blocks.append((rest, zero))
    order = [s for sites, _ in blocks for s in sites]
    vec = blocks[0][1]
    for _, block_vec in blocks[1:]:
        vec = np.kron(vec, block_vec)
    t = vec.reshape([d] * total)
    axes = [order.index(site) for site in range(total)]
    return QState(d, total, np.transpose(t, axes).reshape(-1))


def _run(
    ring: PhaseRing,
    script: ProtocolScript,
    input_state: QState | None,
    seed: int | None,
    forced: dict[int, int] | None = None,
    snapshots: bool = False,
) -> Transcript:
    script.validate()
    rng = np.random.default_rng(seed)
    state = _initial_state(ring, script, input_state)
    outcomes: dict[str, int] = {}
    cdits = 0
    prob = 1.0
    shots: list[QState] | None = [] if snapshots else None
    measure_count = 0
    for step in script.steps:
        if isinstance(step, GateStep):
            m = gates.gate_power(ring, step.name, step.power)
            state = gates.apply_site_gate(state, m, step.site)
        elif isinstance(step, CtrlStep):
            base = gates.gate_power(ring, step.name, 1)
            state = gates.apply_controlled(
                state, base, step.control, step.target, step.exponent
            )
        elif isinstance(step, MeasureStep):
            if forced is not None:
                outcome = forced[measure_count]
                state, p = gates.project_site(state, step.site, outcome)
            else:
                outcome, state, p = gates.measure(state, step.site, rng)
            outcomes[step.register] = int(outcome)
            prob *= p
            measure_count += 1
            if prob == 0.0:
                break
        elif isinstance(step, SendStep):
            if step.src != step.dst:
                cdits += 1
        elif isinstance(step, CondStep):
            power = step.coeff * outcomes[step.register]
            if power:
                m = gates.gate_power(ring, step.name, power)
                state = gates.apply_site_gate(state, m, step.site)
        if shots is not None:
            shots.append(state.copy())
    return Transcript(
        seed=seed,
        outcomes=outcomes,
        final_state=state,
        edits=len(script.resources),
        cdits=cdits,
        probability=prob,
        snapshots=shots,
    )


def run(
    ring: PhaseRing,
    script: ProtocolScript,
    input_state: QState | None = None,
    seed: int | None = 0,
    snapshots: bool = False,
) -> Transcript:
    """Sample one transcript; deterministic for a fixed seed."""
    return _run(ring, script, input_state, seed, snapshots=snapshots)


def run_branches(
    ring: PhaseRing, script: ProtocolScript, input_state: QState | None = None
) -> list[Transcript]:
    """Execute every measurement branch; probabilities sum to one."""
    n_meas = sum(isinstance(s, MeasureStep) for s in script.steps)
    out = []
    for combo in gates.all_digit_tuples(ring.d, n_meas):
        forced = dict(enumerate(combo))
        tr = _run(ring, script, input_state, None, forced=forced)
        if tr.probability > 1e-15:
            out.append(tr)
    return out


def state_on_sites(state: QState, sites) -> QState:
    """Restrict to ``sites``; all other qudits must be in product form.

    Used to read off the surviving carriers after measurements collapse
    the rest of the register.
    """
    sites = tuple(sites)
    d, n = state.d, state.n
    t = state.vector.reshape([d] * n)
    others = [i for i in range(n) if i not in sites]
    # find the (unique) basis values of the collapsed qudits
    for site in sorted(others, reverse=True):
        marg = np.abs(t).sum(axis=tuple(i for i in range(t.ndim) if i != site))
        val = int(np.argmax(marg))
        t = np.take(t, val, axis=site)
    v = t.reshape(-1)
    order = list(np.argsort(sites))
    nk = len(sites)
    t = v.reshape([d] * nk)
    t = np.transpose(t, [order.index(i) for i in range(nk)])
    return QState(d, nk, t.reshape(-1))


def phase_free_fidelity(a: QState, b: QState) -> float:
    """|<a|b>| over the product of norms; 1 means equal up to global phase."""
    na, nb = np.linalg.norm(a.vector), np.linalg.norm(b.vector)
    return float(abs(np.vdot(a.vector, b.vector)) / (na * nb))


# ---------------------------------------------------------------------------
# concrete protocols
# ---------------------------------------------------------------------------


def teleportation_script(ring: PhaseRing) -> ProtocolScript:
    """One-qudit teleportation from Alice to Bob over a shared |Max>_2.

    Alice holds the input (site 0) and one resource half (site 1); Bob
    holds site 2.  Outcome corrections are X**m2 then Z**m1, and the
    output equals the input exactly on every branch.
    """
    steps: list[Step] = [
        CtrlStep("alice", "X", control=0, target=1),
        GateStep("alice", "F", site=0, power=-1),
        MeasureStep("alice", 0, "m1"),
        MeasureStep("alice", 1, "m2"),
        SendStep("alice", "bob", "m1"),
        SendStep("alice", "bob", "m2"),
        CondStep("bob", "X", site=2, register="m2", coeff=1),
        CondStep("bob", "Z", site=2, register="m1", coeff=1),
    ]
    return ProtocolScript(
        d=ring.d,
        n_sites=3,
        parties={"alice": (0, 1), "bob": (2,)},
        resources=[Resource((1, 2))],
        steps=steps,
        input_sites=(0,),
        output_sites=(2,),
    )


def _merge_steps(
    party: str, next_party: str, chain_end: int, res_a: int, res_b: int, tag: str
) -> list[Step]:
    """Fuse the chain end with a fresh pair (res_a local, res_b remote)."""
    return [
        CtrlStep(party, "X", control=res_a, target=chain_end),
        GateStep(party, "F", site=res_a),
        CtrlStep(party, "X", control=res_a, target=chain_end, exponent=-1),
        MeasureStep(party, res_a, tag),
        SendStep(party, next_party, tag),
        CondStep(next_party, "Y", site=res_b, register=tag, coeff=-1),
    ]


def build_max_script(ring: PhaseRing, n: int) -> ProtocolScript:
    """Distill |Max>_n across n parties from two-qudit resources.

    For n == 2 the shared resource is the answer (one edit, no cdits).
    For n >= 3 the chain starts from the first party's trivial one-qudit
    resource |Max>_1 = |0> and attaches each of the n-1 pairs by one
    measured merge, so the transcript reports n-1 edits and n-1 cdits.
    """
    if n < 2:
        raise ValueError("need at least two parties")
    if n == 2:
        return ProtocolScript(
            d=ring.d,
            n_sites=2,
            parties={"p1": (0,), "p2": (1,)},
            resources=[Resource((0, 1))],
            steps=[],
            output_sites=(0, 1),
        )
    parties = {"p1": (0, 1)}
    for j in range(2, n):
        parties[f"p{j}"] = (2 * (j - 1), 2 * j - 1)
    parties[f"p{n}"] = (2 * (n - 1),)
    resources = [Resource((2 * j - 1, 2 * j)) for j in range(1, n)]
    steps: list[Step] = []
    chain_end = 0
    for j in range(1, n):
        steps.extend(
            _merge_steps(
                f"p{j}", f"p{j + 1}", chain_end, 2 * j - 1, 2 * j, f"m{j}"
            )
        )
        chain_end = 2 * j
    return ProtocolScript(
        d=ring.d,
        n_sites=2 * n - 1,
        parties=parties,
        resources=resources,
        steps=steps,
        output_sites=tuple([0] + [2 * j for j in range(1, n)]),
    )


def bvk_merge_script(ring: PhaseRing, party_sizes) -> ProtocolScript:
    """Merge per-party |Max> blocks into one |Max> over all members.

    Party j brings |Max>_{n_j} on its member qudits; its leader also holds
    one qudit of a shared |Max>_p.  Each leader fuses its share into the
    party block, measures it, and sends the outcome to the next party
    cyclically (p cdits).  Corrections: each party applies Z**-m to every
    member qudit using its own outcome and X**m_prev to its first member,
    which restores |Max>_N exactly up to a global phase on every branch.
    """
    sizes = list(party_sizes)
    p = len(sizes)
    if p < 2 or any(s < 1 for s in sizes):
        raise ValueError("need at least two parties of size >= 1")
    parties: dict[str, tuple[int, ...]] = {}
    members: list[tuple[int, ...]] = []
    leaders: list[int] = []
    base = 0
    for j, size in enumerate(sizes):
        block = tuple(range(base, base + size))
        leader = base + size
        parties[f"p{j + 1}"] = block + (leader,)
        members.append(block)
        leaders.append(leader)
        base += size + 1
    resources = [Resource(block) for block in members]
    resources.append(Resource(tuple(leaders)))
    steps: list[Step] = []
    for j in range(p):
        name = f"p{j + 1}"
        steps.extend(
            [
                CtrlStep(name, "X", control=leaders[j], target=members[j][0]),
                GateStep(name, "F", site=leaders[j]),
                CtrlStep(name, "X", control=leaders[j], target=members[j][0], exponent=-1),
                MeasureStep(name, leaders[j], f"m{j + 1}"),
                SendStep(name, f"p{(j + 1) % p + 1}", f"m{j + 1}"),
            ]
        )
    for j in range(p):
        name = f"p{j + 1}"
        for site in members[j]:
            steps.append(CondStep(name, "Z", site=site, register=f"m{j + 1}", coeff=-1))
        prev = f"m{(j - 1) % p + 1}"
        steps.append(CondStep(name, "X", site=members[j][0], register=prev, coeff=1))
    return ProtocolScript(
        d=ring.d,
        n_sites=base,
        parties=parties,
        resources=resources,
        steps=steps,
        output_sites=tuple(s for block in members for s in block),
    )


def phase_space_measurement(
    ring: PhaseRing, variant: int = 1, simplified: bool = True
) -> ProtocolScript:
    """Two-qudit joint measurement fragment (both qudits one party).

    Variant 1: controlled-X then F**-1 on the first qudit, both metered.
    Variant 2: the mirrored circuit with the second qudit controlling.
    Both realize the same outcome family (the phase-space / Bell
    measurement); outcomes land in registers l1, l2.

    ``simplified=False`` keeps the Gaussian dressing and the trailing
    inverse controlled gate exactly as drawn in the long forms (variant 1
    dresses wire 1 with G**-1 ... G F**-1 G, variant 2 dresses wire 2
    with G ... G**-1 F G**-1); the Gaussians drop by the commuting and
    metering tricks and the trailing gate only relabels outcomes.
    """
    if variant == 1:
        if simplified:
            steps: list[Step] = [
                CtrlStep("a", "X", control=0, target=1),
                GateStep("a", "F", site=0, power=-1),
            ]
        else:
            steps = [
                GateStep("a", "G", site=0, power=-1),
                CtrlStep("a", "X", control=0, target=1),
                GateStep("a", "G", site=0, power=1),
                GateStep("a", "F", site=0, power=-1),
                GateStep("a", "G", site=0, power=1),
                CtrlStep("a", "X", control=0, target=1, exponent=-1),
            ]
        steps += [MeasureStep("a", 0, "l1"), MeasureStep("a", 1, "l2")]
    elif variant == 2:
        if simplified:
            steps = [
                CtrlStep("a", "X", control=1, target=0),
                GateStep("a", "F", site=1, power=1),
            ]
        else:
            steps = [
                GateStep("a", "G", site=1, power=1),
                CtrlStep("a", "X", control=1, target=0),
                GateStep("a", "G", site=1, power=-1),
                GateStep("a", "F", site=1, power=1),
                GateStep("a", "G", site=1, power=-1),
                CtrlStep("a", "X", control=1, target=0, exponent=-1),
            ]
        steps += [MeasureStep("a", 0, "l1"), MeasureStep("a", 1, "l2")]
    else:
        raise ValueError("variant must be 1 or 2")
    return ProtocolScript(
        d=ring.d,
        n_sites=2,
        parties={"a": (0, 1)},
        resources=[],
        steps=steps,
        input_sites=(0, 1),
        output_sites=(),
    )
