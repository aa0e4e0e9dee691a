"""Finite-horizon bi-fuzzy languages and their best controllable approximations.

A :class:`FiniteLang` assigns an NCFD to every string of length at most its
horizon.  Controllability, the supremal controllable sublanguage and the
infimal prefix-closed controllable superlanguage are all evaluated inside
that horizon.  The extremal languages are taken over languages whose values
lie in a finite :class:`ValueLattice`, which makes them computable exactly;
exhaustive oracles are provided for cross-checking on tiny instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from bifuzzy.automaton import Bfdes, EventString, all_strings, as_string, language_degree, marked_degree
from bifuzzy.errors import AlphabetMismatch, LatticeNotClosed, PremiseViolated, SearchSpaceTooLarge
from bifuzzy.ncfd import BOTTOM, NCFD, TOP, as_ncfd, join, join_all, leq, meet, meet_all
from bifuzzy.supervisory import UncontrollabilityMap

ORACLE_LIMIT = 10**6


@dataclass(frozen=True)
class FiniteLang:
    """String → degree map over ``alphabet`` up to length ``horizon``.

    Strings absent from ``degrees`` have degree ``1/0``; bottom entries are
    dropped on construction so equal languages compare equal.
    """

    horizon: int
    alphabet: tuple[str, ...]
    degrees: Mapping[EventString, NCFD] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.horizon < 0:
            raise ValueError("horizon must be >= 0")
        alphabet = tuple(sorted(set(self.alphabet)))
        if not alphabet:
            raise AlphabetMismatch("alphabet must not be empty")
        object.__setattr__(self, "alphabet", alphabet)
        known = set(alphabet)
        clean = {}
        for s, d in self.degrees.items():
            s = as_string(s)
            if len(s) > self.horizon:
                raise PremiseViolated(f"string {'.'.join(s)!r} exceeds horizon {self.horizon}")
            bad = [e for e in s if e not in known]
            if bad:
                raise AlphabetMismatch(f"string {'.'.join(s)!r} uses events {bad} outside {list(alphabet)}")
            d = as_ncfd(d)
            if d != BOTTOM:
                clean[s] = d
        object.__setattr__(self, "degrees", dict(sorted(clean.items(), key=lambda kv: (len(kv[0]), kv[0]))))

    def __getitem__(self, s: str | Iterable[str]) -> NCFD:
        return self.degrees.get(as_string(s), BOTTOM)

    def __hash__(self) -> int:
        return hash((self.horizon, self.alphabet, tuple(self.degrees.items())))

    def strings(self) -> list[EventString]:
        return all_strings(self.alphabet, self.horizon)

    def with_degrees(self, degrees: Mapping[EventString, NCFD]) -> FiniteLang:
        return FiniteLang(self.horizon, self.alphabet, degrees)

    def __le__(self, other: FiniteLang) -> bool:
        return included(self, other)


def _same_shape(a: FiniteLang, b: FiniteLang) -> None:
    if a.alphabet != b.alphabet or a.horizon != b.horizon:
        raise AlphabetMismatch(
            f"languages differ in shape: {list(a.alphabet)}/H={a.horizon} vs {list(b.alphabet)}/H={b.horizon}"
        )


def lang_from_automaton(g: Bfdes, horizon: int, marked: bool = False) -> FiniteLang:
    """Generated (or marked) language of ``g`` truncated at ``horizon``."""
    f = marked_degree if marked else language_degree
    return FiniteLang(horizon, g.alphabet, {s: f(g, s) for s in all_strings(g.alphabet, horizon)})


def unit_language(alphabet: Sequence[str], horizon: int) -> FiniteLang:
    """``ε ↦ 1/1``, everything else ``1/0``: the identity for concatenation."""
    return FiniteLang(horizon, tuple(alphabet), {(): TOP})


def union(a: FiniteLang, b: FiniteLang) -> FiniteLang:
    _same_shape(a, b)
    return a.with_degrees({s: join(a[s], b[s]) for s in a.strings()})


def intersect(a: FiniteLang, b: FiniteLang) -> FiniteLang:
    _same_shape(a, b)
    return a.with_degrees({s: meet(a[s], b[s]) for s in a.strings()})


def concat(a: FiniteLang, b: FiniteLang) -> FiniteLang:
    """``(a·b)(s) = ⊔ over splits s = uv of a(u) ⊓ b(v)``, truncated at the horizon."""
    _same_shape(a, b)
    return a.with_degrees(
        {s: join_all(meet(a[s[:k]], b[s[k:]]) for k in range(len(s) + 1)) for s in a.strings()}
    )


def included(a: FiniteLang, b: FiniteLang) -> bool:
    _same_shape(a, b)
    return all(leq(a[s], b[s]) for s in a.strings())


def pr_finite(k: FiniteLang) -> FiniteLang:
    """Prefix closure: ``pr(K)(s)`` joins ``K(su)`` over every in-horizon extension."""
    out: dict[EventString, NCFD] = {}
    # longest strings first so each value is its own degree joined with its children's closures
    for s in reversed(k.strings()):
        acc = k[s]
        if len(s) < k.horizon:
            for e in k.alphabet:
                acc = join(acc, out[s + (e,)])
        out[s] = acc
    return k.with_degrees(out)


def is_prefix_closed(k: FiniteLang) -> bool:
    return pr_finite(k) == k


@dataclass(frozen=True)
class ControllabilityWitness:
    witness: EventString
    event: str
    lhs: NCFD
    rhs: NCFD


def _check_premises(k: FiniteLang, m: FiniteLang, uc: UncontrollabilityMap) -> None:
    _same_shape(k, m)
    uc.require_alphabet(k.alphabet)
    if not is_prefix_closed(m):
        raise PremiseViolated("M must be prefix-closed")
    if not included(k, m):
        raise PremiseViolated("K must be a sublanguage of M")


def controllability_violation(
    k: FiniteLang, m: FiniteLang, uc: UncontrollabilityMap
) -> ControllabilityWitness | None:
    """First ``(s, σ)`` with ``pr(K)(s) ⊓ Σuc(σ) ⊓ M(sσ) ⋢ pr(K)(sσ)``, or None."""
    p = pr_finite(k)
    for s in all_strings(k.alphabet, k.horizon - 1):
        for e in k.alphabet:
            lhs = meet(meet(p[s], uc(e)), m[s + (e,)])
            if not leq(lhs, p[s + (e,)]):
                return ControllabilityWitness(s, e, lhs, p[s + (e,)])
    return None


def is_controllable_finite(
    k: FiniteLang, m: FiniteLang, uc: UncontrollabilityMap
) -> tuple[bool, ControllabilityWitness | None]:
    """Controllability of ``K`` with respect to ``M`` inside the horizon."""
    _check_premises(k, m, uc)
    w = controllability_violation(k, m, uc)
    return w is None, w


# ---------------------------------------------------------------------------
# value lattices


@dataclass(frozen=True)
class ValueLattice:
    """A finite set of NCFDs closed under meet and join, holding ``1/0`` and ``1/1``."""

    elements: tuple[NCFD, ...]

    def __post_init__(self) -> None:
        elems = tuple(sorted(set(self.elements), key=lambda d: d.points))
        object.__setattr__(self, "elements", elems)
        have = set(elems)
        if BOTTOM not in have or TOP not in have:
            raise LatticeNotClosed("lattice must contain 1/0 and 1/1")
        for a in elems:
            for b in elems:
                if meet(a, b) not in have or join(a, b) not in have:
                    raise LatticeNotClosed(f"{a} and {b} have meet or join outside the set")

    @classmethod
    def generated_by(cls, gens: Iterable[NCFD | str], max_size: int = 64) -> ValueLattice:
        """Close ``gens ∪ {1/0, 1/1}`` under meet and join."""
        elems = {BOTTOM, TOP} | {as_ncfd(g) for g in gens}
        while True:
            new = {f(a, b) for a in elems for b in elems for f in (meet, join)} - elems
            if not new:
                return cls(tuple(elems))
            elems |= new
            if len(elems) > max_size:
                raise LatticeNotClosed(f"generated lattice exceeds {max_size} elements")

    def __contains__(self, d: NCFD) -> bool:
        return d in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def residual(self, a: NCFD, b: NCFD) -> NCFD:
        """Largest lattice element ``x`` with ``x ⊓ a ⊑ b``."""
        return join_all(x for x in self.elements if leq(meet(x, a), b))

    def cover(self, y: NCFD) -> NCFD:
        """Least lattice element above ``y``."""
        return meet_all(x for x in self.elements if leq(y, x))

    def require(self, lang: FiniteLang, what: str) -> None:
        for s, d in lang.degrees.items():
            if d not in self:
                raise LatticeNotClosed(f"{what}({'.'.join(s) or 'ε'}) = {d} is not a lattice value")


def supremal_controllable(
    k: FiniteLang, m: FiniteLang, uc: UncontrollabilityMap, lattice: ValueLattice
) -> FiniteLang:
    """Largest controllable sublanguage of ``K`` with values in ``lattice``.

    Descending repair: at each violation ``(s, σ)`` every string extending
    ``s`` is cut down to the largest value that makes the condition hold.
    No controllable sublanguage is ever cut, so the fixpoint is the supremum.
    """
    _check_premises(k, m, uc)
    lattice.require(k, "K")
    cur = dict((s, k[s]) for s in k.strings())
    while True:
        lang = k.with_degrees(cur)
        w = controllability_violation(lang, m, uc)
        if w is None:
            return lang
        a = meet(uc(w.event), m[w.witness + (w.event,)])
        r = lattice.residual(a, w.rhs)
        n = len(w.witness)
        for s in cur:
            if s[:n] == w.witness:
                cur[s] = meet(cur[s], r)


def infimal_closed_controllable(
    k: FiniteLang, m: FiniteLang, uc: UncontrollabilityMap, lattice: ValueLattice
) -> FiniteLang:
    """Smallest prefix-closed controllable language between ``K`` and ``M``.

    Ascending repair from ``pr(K)``: a violating successor is raised to the
    least lattice value covering the left-hand side, then prefix closure is
    restored.  Every candidate language stays above each iterate.
    """
    _check_premises(k, m, uc)
    lattice.require(k, "K")
    lattice.require(m, "M")
    lang = pr_finite(k)
    while True:
        w = controllability_violation(lang, m, uc)
        if w is None:
            return lang
        t = w.witness + (w.event,)
        cur = dict(lang.degrees)
        cur[t] = join(lang[t], lattice.cover(w.lhs))
        lang = pr_finite(k.with_degrees(cur))


# ---------------------------------------------------------------------------
# exhaustive oracles


class _Tables:
    """Integer-indexed meet/join/order tables so enumeration avoids NCFD arithmetic."""

    def __init__(self, k: FiniteLang, m: FiniteLang, uc: UncontrollabilityMap, lattice: ValueLattice):
        self.vals = list(lattice.elements)
        idx = {v: i for i, v in enumerate(self.vals)}
        n = len(self.vals)
        self.join = [[idx[join(a, b)] for b in self.vals] for a in self.vals]
        self.leq = [[leq(a, b) for b in self.vals] for a in self.vals]
        self.bottom = idx[BOTTOM]
        self.strings = k.strings()
        self.pos = {s: i for i, s in enumerate(self.strings)}
        self.children = [
            [self.pos[s + (e,)] for e in k.alphabet] if len(s) < k.horizon else [] for s in self.strings
        ]
        # ok[j][x][y]: does x ⊓ Σuc(σ) ⊓ M(sσ) ⊑ y hold for the j-th (s, σ) pair
        self.pairs = []
        self.ok = []
        for i, s in enumerate(self.strings):
            for e, c in zip(k.alphabet, self.children[i]):
                a = meet(uc(e), m[s + (e,)])
                self.pairs.append((i, c))
                self.ok.append([[leq(meet(x, a), y) for y in self.vals] for x in self.vals])
        self.k_idx = [idx.get(k[s]) for s in self.strings]
        self.m_vals = [m[s] for s in self.strings]
        self.n = n

    def pr(self, cand: Sequence[int]) -> list[int]:
        out = list(cand)
        for i in range(len(self.strings) - 1, -1, -1):
            for c in self.children[i]:
                out[i] = self.join[out[i]][out[c]]
        return out

    def controllable(self, cand: Sequence[int]) -> bool:
        p = self.pr(cand)
        return all(self.ok[j][p[i]][p[c]] for j, (i, c) in enumerate(self.pairs))


def _guard(lattice: ValueLattice, k: FiniteLang) -> None:
    size = len(lattice) ** len(k.strings())
    if size > ORACLE_LIMIT:
        raise SearchSpaceTooLarge(f"{size} candidate languages exceed the oracle limit {ORACLE_LIMIT}")


def brute_force_supremal(
    k: FiniteLang, m: FiniteLang, uc: UncontrollabilityMap, lattice: ValueLattice
) -> FiniteLang:
    """Join of every lattice-valued controllable sublanguage of ``K``, by enumeration."""
    _check_premises(k, m, uc)
    lattice.require(k, "K")
    _guard(lattice, k)
    t = _Tables(k, m, uc, lattice)
    below = [[x for x in range(t.n) if t.leq[x][ki]] for ki in t.k_idx]
    acc = [t.bottom] * len(t.strings)
    for cand in itertools.product(*below):
        if t.controllable(cand):
            acc = [t.join[a][b] for a, b in zip(acc, cand)]
    return k.with_degrees({s: t.vals[v] for s, v in zip(t.strings, acc)})


def brute_force_infimal(
    k: FiniteLang, m: FiniteLang, uc: UncontrollabilityMap, lattice: ValueLattice
) -> FiniteLang:
    """Meet of every lattice-valued prefix-closed controllable language in ``[K, M]``."""
    _check_premises(k, m, uc)
    lattice.require(k, "K")
    lattice.require(m, "M")
    _guard(lattice, k)
    t = _Tables(k, m, uc, lattice)
    idx = {v: i for i, v in enumerate(t.vals)}
    m_idx = [idx[v] for v in t.m_vals]
    between = [[x for x in range(t.n) if t.leq[ki][x] and t.leq[x][mi]] for ki, mi in zip(t.k_idx, m_idx)]
    found = None
    for cand in itertools.product(*between):
        if t.pr(cand) != list(cand) or not t.controllable(cand):
            continue
        found = list(cand) if found is None else [idx[meet(t.vals[a], t.vals[b])] for a, b in zip(found, cand)]
    if found is None:  # unreachable: M itself always qualifies
        raise PremiseViolated("no prefix-closed controllable language between K and M")
    return k.with_degrees({s: t.vals[v] for s, v in zip(t.strings, found)})
