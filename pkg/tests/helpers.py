"""Random generators and oracles shared by the test modules."""

from __future__ import annotations

import random
from importlib import resources
from pathlib import Path

from hypothesis import strategies as st

from bifuzzy.approx import FiniteLang, ValueLattice, pr_finite
from bifuzzy.automaton import Bfdes, all_strings
from bifuzzy.ncfd import BOTTOM, NCFD, TOP, canonicalize
from bifuzzy.relations import NcfdMatrix
from bifuzzy.supervisory import UncontrollabilityMap

GRID = [round(k / 10, 1) for k in range(11)]
GRADES = [round(k / 10, 1) for k in range(1, 11)]

FIXTURES = Path(str(resources.files("bifuzzy") / "fixtures"))


def ncfd_from(support: list[float], peak: int, drops: list[float]) -> NCFD:
    """Unimodal grades: 1 at ``peak``, non-increasing moving away from it."""
    grades = [0.0] * len(support)
    grades[peak] = 1.0
    it = iter(drops)
    for i in range(peak - 1, -1, -1):
        grades[i] = min(grades[i + 1], next(it))
    for i in range(peak + 1, len(support)):
        grades[i] = min(grades[i - 1], next(it))
    return canonicalize(zip(support, grades))


def random_ncfd(rng: random.Random, max_support: int = 5) -> NCFD:
    k = rng.randint(1, max_support)
    support = sorted(rng.sample(GRID, k))
    return ncfd_from(support, rng.randrange(k), [rng.choice(GRADES) for _ in range(k)])


@st.composite
def ncfds(draw, max_support: int = 5) -> NCFD:
    support = sorted(draw(st.sets(st.sampled_from(GRID), min_size=1, max_size=max_support)))
    peak = draw(st.integers(0, len(support) - 1))
    drops = draw(st.lists(st.sampled_from(GRADES), min_size=len(support), max_size=len(support)))
    return ncfd_from(support, peak, drops)


def random_matrix(rng: random.Random, rows: int, cols: int) -> NcfdMatrix:
    return NcfdMatrix(tuple(tuple(random_ncfd(rng) for _ in range(cols)) for _ in range(rows)))


def random_automaton(rng: random.Random, n: int = 2, events=("a", "b"), marked: bool = True) -> Bfdes:
    x0 = tuple(random_ncfd(rng) for _ in range(n))
    xm = tuple(random_ncfd(rng) for _ in range(n)) if marked else None
    return Bfdes(tuple(f"x{i}" for i in range(n)), {e: random_matrix(rng, n, n) for e in events}, x0, xm)


def random_ucmap(rng: random.Random, events=("a", "b")) -> UncontrollabilityMap:
    return UncontrollabilityMap({e: random_ncfd(rng) for e in events})


def pair_oracle(a: NCFD, b: NCFD, op) -> dict[float, float]:
    """Sup-min extension of ``op`` sampled on every breakpoint and gap midpoint.

    Both grade functions are constant on each open gap of the union of
    supports, so one representative per gap captures the supremum exactly.
    """
    pts = sorted(set(a.support) | set(b.support))
    sample = pts + [(x + y) / 2 for x, y in zip(pts, pts[1:])]
    out = {v: 0.0 for v in sample}
    for u in sample:
        for w in sample:
            v = op(u, w)
            out[v] = max(out[v], min(a.grade(u), b.grade(w)))
    return out


def chain_lattice(rng: random.Random) -> ValueLattice:
    """Three-element chain ``1/0 ⊏ c ⊏ 1/1``."""
    while True:
        c = random_ncfd(rng)
        if c not in (BOTTOM, TOP):
            return ValueLattice((BOTTOM, c, TOP))


def random_sublanguage(rng: random.Random, m: FiniteLang, lat: ValueLattice) -> FiniteLang:
    """Lattice-valued ``K`` with ``K ⊆ M``."""
    return m.with_degrees({s: rng.choice([v for v in lat.elements if v <= m[s]]) for s in m.strings()})


def random_tiny_setting(rng: random.Random, horizon: int = 2, events=("a", "b")):
    """A chain lattice, a prefix-closed lattice-valued ``M`` and an uncontrollability map."""
    lat = chain_lattice(rng)
    vals = lat.elements
    m = pr_finite(FiniteLang(horizon, events, {s: rng.choice(vals) for s in all_strings(events, horizon)}))
    mid = next(v for v in vals if v not in (BOTTOM, TOP))
    uc = UncontrollabilityMap({e: rng.choice([BOTTOM, TOP, mid, random_ncfd(rng)]) for e in events})
    return m, uc, lat


def random_tiny_instance(rng: random.Random, horizon: int = 2, events=("a", "b")):
    """``(K, M, Σuc, lattice)`` small enough for the exhaustive oracles."""
    m, uc, lat = random_tiny_setting(rng, horizon, events)
    return random_sublanguage(rng, m, lat), m, uc, lat
