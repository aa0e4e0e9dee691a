"""Supervisory control of bi-fuzzy automata.

The controllability check explores the reachable pairs of (plant state,
spec state) breadth first.  Strings reaching the same pair share every
language degree, so testing one witness per pair decides the condition for
all strings.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from bifuzzy.automaton import (
    Bfdes,
    EventString,
    all_strings,
    as_string,
    generated_from_state,
    language_degree,
    marked_degree,
    parallel_compose,
)
from bifuzzy.errors import AlphabetMismatch, StateBudgetExceeded, UnknownEvent
from bifuzzy.ncfd import NCFD, TOP, as_ncfd, complement, join, leq, meet
from bifuzzy.relations import NcfdVector, dot

DEFAULT_BUDGET = 10_000

SupervisorFn = Callable[[EventString, str], NCFD]


@dataclass(frozen=True)
class UncontrollabilityMap:
    """Degree to which each event is uncontrollable."""

    degrees: Mapping[str, NCFD]

    def __post_init__(self) -> None:
        object.__setattr__(self, "degrees", {k: as_ncfd(v) for k, v in sorted(self.degrees.items())})

    def __call__(self, event: str) -> NCFD:
        try:
            return self.degrees[event]
        except KeyError:
            raise UnknownEvent(f"no uncontrollability degree for event {event!r}") from None

    def controllable(self, event: str) -> NCFD:
        return complement(self(event))

    def require_alphabet(self, alphabet: Iterable[str]) -> None:
        want = set(alphabet)
        have = set(self.degrees)
        if want != have:
            raise AlphabetMismatch(
                f"uncontrollability map covers {sorted(have)}, plant alphabet is {sorted(want)}"
            )


@dataclass(frozen=True)
class StatePairNode:
    plant_state: NcfdVector
    spec_state: NcfdVector
    witness: EventString

    @property
    def is_root(self) -> bool:
        return not self.witness


@dataclass(frozen=True)
class Violation:
    """One failed instance of the controllability test, with every operand."""

    witness: EventString
    event: str
    plant_next: NCFD  # L_G(sσ)
    spec_now: NCFD  # L_R(s)
    uc: NCFD
    spec_next: NCFD  # L_R(sσ)
    lhs: NCFD

    @property
    def rhs(self) -> NCFD:
        return self.spec_next


@dataclass(frozen=True)
class ConditionRow:
    """A Table-IV style line: the operands of one (s, σ) test and its outcome."""

    witness: EventString
    event: str
    plant_next: NCFD
    spec_now: NCFD
    uc: NCFD
    spec_next: NCFD
    holds: bool


@dataclass(frozen=True)
class ClosureMismatch:
    witness: EventString
    spec_marked: NCFD
    expected: NCFD


@dataclass
class LmClosureReport:
    holds: bool
    pairs: list[StatePairNode]
    mismatches: list[ClosureMismatch] = field(default_factory=list)


@dataclass
class ControllabilityReport:
    controllable: bool
    pairs: list[StatePairNode]
    rows: list[ConditionRow]
    violations: list[Violation]
    lm_closure: LmClosureReport | None = None

    @property
    def verdict(self) -> str:
        return "controllable" if self.controllable else "uncontrollable"

    @property
    def nonblocking_achievable(self) -> bool | None:
        if self.lm_closure is None:
            return None
        return self.controllable and self.lm_closure.holds


def _require_same_alphabet(g: Bfdes, r: Bfdes) -> None:
    if g.alphabet != r.alphabet:
        raise AlphabetMismatch(f"plant alphabet {list(g.alphabet)} differs from spec alphabet {list(r.alphabet)}")


def supervisor_degree(r: Bfdes, uc: UncontrollabilityMap, s: str | Iterable[str], event: str) -> NCFD:
    """Enablement degree ``L_R(sσ) ⊔ Σuc(σ)`` of the spec-driven supervisor."""
    s = as_string(s)
    return join(language_degree(r, s + (event,)), uc(event))


def spec_supervisor(r: Bfdes, uc: UncontrollabilityMap) -> SupervisorFn:
    """The supervisor ``S(s)(σ) = L_R(sσ) ⊔ Σuc(σ)`` as a callable."""

    def s_fn(s: EventString, event: str) -> NCFD:
        return supervisor_degree(r, uc, s, event)

    return s_fn


def admissibility_holds(g: Bfdes, sup: SupervisorFn, uc: UncontrollabilityMap, horizon: int) -> bool:
    """``Σuc(σ) ⊓ L_G(sσ) ⊑ S(s)(σ)`` for every ``|s| ≤ horizon`` and event."""
    for s in all_strings(g.alphabet, horizon):
        for e in g.alphabet:
            if not leq(meet(uc(e), language_degree(g, s + (e,))), sup(s, e)):
                return False
    return True


def controlled_language_degree(g: Bfdes, sup: SupervisorFn, s: str | Iterable[str]) -> NCFD:
    """Closed-loop degree: ``L(sσ) = L(s) ⊓ L_G(sσ) ⊓ S(s)(σ)`` with ``L(ε) = 1/1``."""
    s = as_string(s)
    deg = TOP
    for k, e in enumerate(s):
        g.matrix(e)  # raise UnknownEvent early
        deg = meet(meet(deg, language_degree(g, s[: k + 1])), sup(s[:k], e))
    return deg


def controlled_marked_degree(g: Bfdes, sup: SupervisorFn, s: str | Iterable[str]) -> NCFD:
    """Closed-loop marked degree: controlled degree met with the plant's marked degree."""
    s = as_string(s)
    if not s:
        return TOP
    return meet(controlled_language_degree(g, sup, s), marked_degree(g, s))


def reachable_pairs(g: Bfdes, r: Bfdes, budget: int = DEFAULT_BUDGET) -> list[StatePairNode]:
    """Breadth-first computing tree over (plant state, spec state) labels.

    A child whose label matches an already expanded vertex is a leaf.  The root
    stands for ε alone, whose degrees are ``1/1`` by definition, so a later
    string returning to the initial vectors is still recorded as its own class.
    """
    _require_same_alphabet(g, r)
    if budget < 1:
        raise ValueError("budget must be >= 1")
    root = StatePairNode(g.x0, r.x0, ())
    out = [root]
    seen: set[tuple[NcfdVector, NcfdVector]] = set()
    queue = deque([root])
    while queue:
        node = queue.popleft()
        for e in g.alphabet:
            x = g.step(node.plant_state, e)
            q = r.step(node.spec_state, e)
            if (x, q) in seen:
                continue
            seen.add((x, q))
            child = StatePairNode(x, q, node.witness + (e,))
            out.append(child)
            if len(out) > budget:
                raise StateBudgetExceeded(f"more than {budget} reachable state pairs")
            queue.append(child)
    return out


def _pair_degree(node: StatePairNode, vec: NcfdVector) -> NCFD:
    return TOP if node.is_root else generated_from_state(vec)


def check_controllability(
    g: Bfdes, r: Bfdes, uc: UncontrollabilityMap, budget: int = DEFAULT_BUDGET
) -> ControllabilityReport:
    """Decide ``L_R(s) ⊓ Σuc(σ) ⊓ L_G(sσ) ⊑ L_R(sσ)`` for all strings and events.

    ``r`` must generate the prefix closure of the specification.
    """
    _require_same_alphabet(g, r)
    uc.require_alphabet(g.alphabet)
    pairs = reachable_pairs(g, r, budget)
    rows, violations = [], []
    for node in pairs:
        spec_now = _pair_degree(node, node.spec_state)
        for e in g.alphabet:
            plant_next = generated_from_state(g.step(node.plant_state, e))
            spec_next = generated_from_state(r.step(node.spec_state, e))
            lhs = meet(meet(spec_now, uc(e)), plant_next)
            ok = leq(lhs, spec_next)
            rows.append(ConditionRow(node.witness, e, plant_next, spec_now, uc(e), spec_next, ok))
            if not ok:
                violations.append(Violation(node.witness, e, plant_next, spec_now, uc(e), spec_next, lhs))
    return ControllabilityReport(not violations, pairs, rows, violations)


def check_lm_closure(g: Bfdes, r: Bfdes, budget: int = DEFAULT_BUDGET) -> LmClosureReport:
    """Per pair, ``L_R,m(s) = L_R(s) ⊓ L_G,m(s)``."""
    pairs = reachable_pairs(g, r, budget)
    bad = []
    for node in pairs:
        if node.is_root:
            continue  # every degree of ε is 1/1
        spec_marked = dot(node.spec_state, r.xm)
        expected = meet(generated_from_state(node.spec_state), dot(node.plant_state, g.xm))
        if spec_marked != expected:
            bad.append(ClosureMismatch(node.witness, spec_marked, expected))
    return LmClosureReport(not bad, pairs, bad)


def check_nonblocking_supervision(
    g: Bfdes, r: Bfdes, uc: UncontrollabilityMap, budget: int = DEFAULT_BUDGET
) -> ControllabilityReport:
    """Controllability plus Lm-closure; see :attr:`ControllabilityReport.nonblocking_achievable`."""
    report = check_controllability(g, r, uc, budget)
    report.lm_closure = check_lm_closure(g, r, budget)
    return report


def realize_supervisor(g: Bfdes, r: Bfdes) -> Bfdes:
    """Closed-loop automaton ``G || R``."""
    return parallel_compose(g, r)
