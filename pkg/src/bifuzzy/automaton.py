"""Bi-fuzzy automata: state vectors driven by event matrices, their generated
and marked languages, and parallel composition."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from bifuzzy.errors import DimensionMismatch, UnknownEvent, ValidationError
from bifuzzy.ncfd import NCFD, TOP
from bifuzzy.relations import (
    NcfdMatrix,
    NcfdVector,
    all_ones_vector,
    dot,
    identity_matrix,
    tensor,
    vec_compose,
    vec_tensor,
    vector,
)

EventString = tuple[str, ...]


def as_string(s: str | Iterable[str]) -> EventString:
    """Accept a tuple/list of names or a dot-separated string ("" is ε)."""
    if isinstance(s, str):
        return tuple(p for p in s.split(".") if p) if s else ()
    return tuple(s)


@dataclass(frozen=True)
class Bfdes:
    """A bi-fuzzy automaton.

    ``events`` maps each event name to an ``n × n`` matrix; ``x0`` and ``xm``
    are the initial and marking vectors.  ``xm`` defaults to all ``1/1``.
    """

    state_labels: tuple[str, ...]
    events: Mapping[str, NcfdMatrix]
    x0: NcfdVector
    xm: NcfdVector | None = None
    _sorted: tuple[str, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = len(self.state_labels)
        if n < 1:
            raise DimensionMismatch("automaton needs at least one state")
        object.__setattr__(self, "state_labels", tuple(self.state_labels))
        object.__setattr__(self, "x0", vector(self.x0))
        xm = all_ones_vector(n) if self.xm is None else vector(self.xm)
        object.__setattr__(self, "xm", xm)
        if not self.events:
            raise ValidationError("automaton needs at least one event", "NoEvents")
        object.__setattr__(self, "events", dict(sorted(self.events.items())))
        object.__setattr__(self, "_sorted", tuple(self.events))
        if len(self.x0) != n or len(xm) != n:
            raise DimensionMismatch(f"x0/xm must have length {n}")
        for name, m in self.events.items():
            if m.shape != (n, n):
                raise DimensionMismatch(f"event {name!r} matrix is {m.shape[0]}x{m.shape[1]}, expected {n}x{n}")

    def __hash__(self) -> int:
        return hash((self.state_labels, tuple(self.events.items()), self.x0, self.xm))

    @property
    def n(self) -> int:
        return len(self.state_labels)

    @property
    def alphabet(self) -> tuple[str, ...]:
        """Event names in lexicographic order."""
        return self._sorted

    def matrix(self, event: str) -> NcfdMatrix:
        try:
            return self.events[event]
        except KeyError:
            raise UnknownEvent(f"unknown event {event!r}; alphabet is {list(self.alphabet)}") from None

    def step(self, x: Sequence[NCFD], event: str) -> NcfdVector:
        return vec_compose(x, self.matrix(event))

    def state_after(self, s: str | Iterable[str]) -> NcfdVector:
        return state_after(self, s)

    def language_degree(self, s: str | Iterable[str]) -> NCFD:
        return language_degree(self, s)

    def marked_degree(self, s: str | Iterable[str]) -> NCFD:
        return marked_degree(self, s)


def state_after(g: Bfdes, s: str | Iterable[str]) -> NcfdVector:
    """``x0 ⊙ σ1 ⊙ … ⊙ σk``; the empty string leaves ``x0`` unchanged."""
    x = g.x0
    for e in as_string(s):
        x = g.step(x, e)
    return x


def generated_from_state(x: Sequence[NCFD]) -> NCFD:
    """``x ⊙ Âᵀ``, the join of the state entries."""
    return dot(x, all_ones_vector(len(x)))


def language_degree(g: Bfdes, s: str | Iterable[str]) -> NCFD:
    s = as_string(s)
    if not s:
        return TOP
    return generated_from_state(state_after(g, s))


def marked_degree(g: Bfdes, s: str | Iterable[str]) -> NCFD:
    """``x0 ⊙ s ⊙ xmᵀ``."""
    s = as_string(s)
    if not s:
        return TOP
    return dot(state_after(g, s), g.xm)


def parallel_compose(g1: Bfdes, g2: Bfdes) -> Bfdes:
    """Synchronous product.  Shared events use ``σ1 ⊗ σ2``; private events of
    either side are lifted with an identity factor for the other side."""
    i1, i2 = identity_matrix(g1.n), identity_matrix(g2.n)
    events = {}
    for name in sorted(set(g1.events) | set(g2.events)):
        a = g1.events.get(name, i1)
        b = g2.events.get(name, i2)
        events[name] = tensor(a, b)
    labels = tuple(f"{p}|{q}" for p in g1.state_labels for q in g2.state_labels)
    return Bfdes(labels, events, vec_tensor(g1.x0, g2.x0), vec_tensor(g1.xm, g2.xm))


def neutral_automaton(alphabet: Iterable[str]) -> Bfdes:
    """One state, every event the identity; composing with it changes nothing."""
    one = NcfdMatrix(((TOP,),))
    return Bfdes(("*",), {e: one for e in alphabet}, (TOP,), (TOP,))


def all_strings(alphabet: Sequence[str], max_len: int) -> list[EventString]:
    """Every string over ``alphabet`` of length at most ``max_len``, shortest first."""
    out: list[EventString] = [()]
    layer: list[EventString] = [()]
    for _ in range(max_len):
        layer = [s + (e,) for s in layer for e in alphabet]
        out.extend(layer)
    return out
