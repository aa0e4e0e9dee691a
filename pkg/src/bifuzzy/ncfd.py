"""Normal convex fuzzy degrees (NCFDs) and their meet/join algebra.

An NCFD is a type-1 fuzzy set over [0, 1] with finite support, written as
``g1/u1 + g2/u2 + ...`` where ``u`` is a primary membership value and ``g``
its secondary grade.  Values are immutable and hashable, so they can key
dictionaries and sets during state-space exploration.

Also here: :class:`IntervalDegree`, the crisp-interval degree used by the
traffic controller, and grid discretization helpers for interval-piece
degrees.
"""

from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from bifuzzy.errors import (
    EmptySupport,
    InvalidInterval,
    NotConvex,
    NotNormal,
    OutOfRange,
    ParseError,
    ValidationError,
)

TOL = 1e-9
_DIGITS = 12


def _q(x: float) -> float:
    # Snap to 12 decimals so 1 - 0.9 and 0.1 hash identically.
    return round(float(x), _DIGITS) + 0.0


def _check_points(points: Sequence[tuple[float, float]]) -> None:
    if not points:
        raise EmptySupport("NCFD support is empty")
    for u, g in points:
        if not (-TOL <= u <= 1 + TOL) or not (-TOL <= g <= 1 + TOL):
            raise OutOfRange(f"term {g}/{u} lies outside [0,1]")
        if g <= 0:
            raise ValidationError(f"zero grade at u={u} inside the support", "ZeroGrade")
    for (u0, _), (u1, _) in zip(points, points[1:]):
        if not u0 < u1:
            raise ValidationError("primary values must be strictly increasing", "NotSorted")
    grades = [g for _, g in points]
    if max(grades) < 1 - TOL:
        raise NotNormal(f"maximum grade {max(grades)} < 1")
    # unimodality: every grade is at least the smaller of the best grades on either side
    right = _suffix_max(grades)
    left = 0.0
    for i, g in enumerate(grades):
        if 0 < i < len(grades) - 1 and g < min(left, right[i + 1]) - TOL:
            raise NotConvex(f"grade {g} at u={points[i][0]} dips below both neighbours")
        left = max(left, g)


def _suffix_max(grades: Sequence[float]) -> list[float]:
    out = [0.0] * (len(grades) + 1)
    for i in range(len(grades) - 1, -1, -1):
        out[i] = max(out[i + 1], grades[i])
    return out


def _gaps(points: Sequence[tuple[float, float]]) -> list[float]:
    """Grade on each open gap ``(u_i, u_i+1)`` of the convex step hull."""
    grades = [g for _, g in points]
    right = _suffix_max(grades)
    out = []
    left = 0.0
    for i in range(len(grades) - 1):
        left = max(left, grades[i])
        out.append(min(left, right[i + 1]))
    return out


def _minimal(points: tuple[tuple[float, float], ...]) -> tuple[tuple[float, float], ...]:
    # Drop interior points whose grade equals both adjacent gap grades; the
    # step function they describe is unchanged, and the form becomes unique.
    pts = list(points)
    i = 1
    while i < len(pts) - 1:
        gaps = _gaps(pts)
        g = pts[i][1]
        if gaps[i - 1] == g and gaps[i] == g:
            del pts[i]
            i = max(i - 1, 1)
        else:
            i += 1
    return tuple(pts)


@dataclass(frozen=True)
class NCFD:
    """A finitely described normal convex fuzzy degree.

    ``points`` lists ``(u, g)`` breakpoints with strictly increasing ``u``.
    Between breakpoints the degree follows its convex step hull: an open gap
    takes the smaller of the best grades to its left and right, so the list
    ``1/0.6 + 0.6/0.9`` also grades every ``u`` in ``(0.6, 0.9)`` at 0.6.
    Interior points that do not change that function are dropped on
    construction, so two degrees are equal exactly when they describe the
    same membership function.

    Build instances through :func:`canonicalize` or :func:`parse_ncfd`.
    """

    points: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        _check_points(self.points)
        object.__setattr__(self, "points", _minimal(tuple(self.points)))

    # operator sugar: & is meet, | is join, ~ is complement, <= is inclusion
    def __and__(self, other: NCFD) -> NCFD:
        return meet(self, other)

    def __or__(self, other: NCFD) -> NCFD:
        return join(self, other)

    def __invert__(self) -> NCFD:
        return complement(self)

    def __le__(self, other: NCFD) -> bool:
        return leq(self, other)

    def __ge__(self, other: NCFD) -> bool:
        return leq(other, self)

    def __str__(self) -> str:
        return format_ncfd(self)

    def __repr__(self) -> str:
        return f"NCFD({format_ncfd(self)!r})"

    @property
    def support(self) -> tuple[float, ...]:
        return tuple(u for u, _ in self.points)

    def grade(self, u: float) -> float:
        """Membership grade of primary value ``u`` under the step hull."""
        u = _q(u)
        pts = self.points
        if u < pts[0][0] or u > pts[-1][0]:
            return 0.0
        for i, (v, g) in enumerate(pts):
            if v == u:
                return g
            if v > u:
                return _gaps(pts)[i - 1]
        return 0.0  # unreachable

    def is_crisp(self) -> bool:
        return len(self.points) == 1

    @classmethod
    def crisp(cls, u: float) -> NCFD:
        """The singleton degree ``1/u``."""
        return canonicalize([(u, 1.0)])


def canonicalize(raw: Iterable[tuple[float, float]]) -> NCFD:
    """Normalise a raw list of ``(u, g)`` pairs into an :class:`NCFD`.

    Duplicate ``u`` values keep their largest grade, zero grades are dropped,
    the list is sorted by ``u`` and redundant interior points are removed.
    Raises :class:`EmptySupport`, :class:`OutOfRange`, :class:`NotNormal` or
    :class:`NotConvex`.
    """
    merged: dict[float, float] = {}
    for u, g in raw:
        if not (-TOL <= u <= 1 + TOL) or not (-TOL <= g <= 1 + TOL):
            raise OutOfRange(f"term {g}/{u} lies outside [0,1]")
        u, g = _q(min(max(u, 0.0), 1.0)), _q(min(max(g, 0.0), 1.0))
        if g <= 0:
            continue
        if merged.get(u, 0.0) < g:
            merged[u] = g
    if not merged:
        raise EmptySupport("NCFD support is empty (no term with positive grade)")
    return NCFD(tuple(sorted(merged.items())))


BOTTOM = NCFD(((0.0, 1.0),))
TOP = NCFD(((1.0, 1.0),))


def _profile(a: NCFD, grid: Sequence[float]) -> tuple[list[float], list[float], list[float]]:
    """Grades of ``a`` at each grid value plus running maxima from the left and right.

    ``grid`` must contain every breakpoint of ``a``; gaps between grid values
    then carry no extra information for the sup-min extension.
    """
    pts = a.points
    gaps = _gaps(pts)
    vals = []
    j = 0
    for v in grid:
        while j < len(pts) and pts[j][0] < v:
            j += 1
        if j < len(pts) and pts[j][0] == v:
            vals.append(pts[j][1])
        elif j == 0 or j == len(pts):
            vals.append(0.0)
        else:
            vals.append(gaps[j - 1])
    lmax, acc = [], 0.0
    for g in vals:
        acc = max(acc, g)
        lmax.append(acc)
    rmax = _suffix_max(vals)[:-1]
    return vals, lmax, rmax


# NCFDs are immutable, so the binary operations memoise safely
@functools.lru_cache(maxsize=1 << 16)
def meet(a: NCFD, b: NCFD) -> NCFD:
    """Meet (intersection): the sup-min extension of ``min`` over primary values.

    At each breakpoint ``v`` the result grade is
    ``max(a(v) ∧ sup_{w≥v} b(w), b(v) ∧ sup_{u≥v} a(u))``.
    """
    if a is b or a == b:
        return a
    grid = sorted(set(a.support) | set(b.support))
    av, _, ar = _profile(a, grid)
    bv, _, br = _profile(b, grid)
    pts = []
    for k, v in enumerate(grid):
        h = max(min(av[k], br[k]), min(bv[k], ar[k]))
        if h > 0:
            pts.append((v, h))
    return NCFD(tuple(pts))


@functools.lru_cache(maxsize=1 << 16)
def join(a: NCFD, b: NCFD) -> NCFD:
    """Join (union): the sup-min extension of ``max`` over primary values."""
    if a is b or a == b:
        return a
    grid = sorted(set(a.support) | set(b.support))
    av, al, _ = _profile(a, grid)
    bv, bl, _ = _profile(b, grid)
    pts = []
    for k, v in enumerate(grid):
        h = max(min(av[k], bl[k]), min(bv[k], al[k]))
        if h > 0:
            pts.append((v, h))
    return NCFD(tuple(pts))


def meet_all(items: Iterable[NCFD]) -> NCFD:
    out = TOP
    for x in items:
        out = meet(out, x)
    return out


def join_all(items: Iterable[NCFD]) -> NCFD:
    out = BOTTOM
    for x in items:
        out = join(out, x)
    return out


def complement(a: NCFD) -> NCFD:
    """Reflect every primary value: ``g/u`` becomes ``g/(1-u)``."""
    return NCFD(tuple(sorted((_q(1.0 - u), g) for u, g in a.points)))


def leq(a: NCFD, b: NCFD) -> bool:
    """Inclusion ``a ⊑ b``, i.e. ``meet(a, b) == a``."""
    return meet(a, b) == a


def centroid(a: NCFD) -> float:
    """Centre of gravity ``Σ u·g / Σ g`` over the breakpoints."""
    num = sum(u * g for u, g in a.points)
    den = sum(g for _, g in a.points)
    return num / den


def rank_geq(a: NCFD, b: NCFD) -> bool:
    """Centroid ranking ``a ⪰ b``; ties count as greater-or-equal."""
    return centroid(a) >= centroid(b) - TOL


# ---------------------------------------------------------------------------
# text form


_TERM = re.compile(r"^\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*/\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*$")


def _fmt(x: float) -> str:
    return format(x, ".12g")


def format_ncfd(a: NCFD) -> str:
    """Render as ``g1/u1 + g2/u2 + ...`` ordered by ascending ``u``."""
    return " + ".join(f"{_fmt(g)}/{_fmt(u)}" for u, g in a.points)


def parse_ncfd(text: str) -> NCFD:
    """Parse the sum-of-terms form; term order and whitespace are free.

    Surrounding braces are tolerated.  Raises :class:`ParseError` on syntax
    problems and a :class:`ValidationError` subclass on invariant failures.
    """
    if not isinstance(text, str):
        raise ParseError(f"expected an NCFD string, got {type(text).__name__}")
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    if not body.strip():
        raise ParseError("empty NCFD string")
    raw = []
    for i, term in enumerate(body.split("+")):
        m = _TERM.match(term)
        if m is None:
            raise ParseError(f"bad term {term.strip()!r} (expected grade/value)", f"term {i + 1}")
        raw.append((float(m.group(2)), float(m.group(1))))
    return canonicalize(raw)


def as_ncfd(x: NCFD | str | float) -> NCFD:
    """Coerce strings (parsed) and bare numbers (crisp degrees) to NCFDs."""
    if isinstance(x, NCFD):
        return x
    if isinstance(x, str):
        return parse_ncfd(x)
    return NCFD.crisp(float(x))


# ---------------------------------------------------------------------------
# interval degrees


@dataclass(frozen=True)
class IntervalDegree:
    """A crisp interval ``[lo, hi]`` of primary values, every grade 1."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (-TOL <= self.lo <= 1 + TOL and -TOL <= self.hi <= 1 + TOL):
            raise InvalidInterval(f"[{self.lo}, {self.hi}] not within [0,1]")
        if self.lo > self.hi + TOL:
            raise InvalidInterval(f"lower end {self.lo} exceeds upper end {self.hi}")

    def __str__(self) -> str:
        return f"[{_fmt(self.lo)}, {_fmt(self.hi)}]"

    @property
    def mid(self) -> float:
        return (self.lo + self.hi) / 2


IZERO = IntervalDegree(0.0, 0.0)
IONE = IntervalDegree(1.0, 1.0)


def imeet(a: IntervalDegree, b: IntervalDegree) -> IntervalDegree:
    return IntervalDegree(min(a.lo, b.lo), min(a.hi, b.hi))


def ijoin(a: IntervalDegree, b: IntervalDegree) -> IntervalDegree:
    return IntervalDegree(max(a.lo, b.lo), max(a.hi, b.hi))


def icomplement(a: IntervalDegree) -> IntervalDegree:
    return IntervalDegree(1.0 - a.hi, 1.0 - a.lo)


def iscale(a: IntervalDegree, gamma: float) -> IntervalDegree:
    """Scale both ends by ``gamma`` and clip to [0, 1]."""
    if gamma < 0:
        raise InvalidInterval(f"negative weight {gamma}")
    return IntervalDegree(min(gamma * a.lo, 1.0), min(gamma * a.hi, 1.0))


def icentroid(a: IntervalDegree) -> float:
    return a.mid


def irank_geq(a: IntervalDegree, b: IntervalDegree) -> bool:
    return icentroid(a) >= icentroid(b) - TOL


# ---------------------------------------------------------------------------
# grid discretization


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid over [0, 1] with spacing ``step``; ``1/step`` must be an integer."""

    step: float = 0.05

    def __post_init__(self) -> None:
        if not 0 < self.step <= 1:
            raise ValidationError(f"grid step {self.step} not in (0, 1]", "InvalidGrid")
        n = 1 / self.step
        if abs(n - round(n)) > 1e-6:
            raise ValidationError(f"grid step {self.step} does not divide 1", "InvalidGrid")

    @property
    def cells(self) -> int:
        return int(round(1 / self.step))

    def points(self) -> list[float]:
        return [_q(k * self.step) for k in range(self.cells + 1)]

    def midpoints(self) -> list[float]:
        return [_q((k + 0.5) * self.step) for k in range(self.cells)]


def embed(d: IntervalDegree, grid: GridSpec = GridSpec()) -> NCFD:
    """Grade-1 NCFD over the grid points inside ``[d.lo, d.hi]``.

    An interval too narrow to contain a grid point maps to the grid point
    nearest its midpoint.
    """
    pts = [u for u in grid.points() if d.lo - TOL <= u <= d.hi + TOL]
    if not pts:
        pts = [_q(round(d.mid / grid.step) * grid.step)]
    return canonicalize((u, 1.0) for u in pts)


def _snap(u: float, grid: GridSpec) -> float:
    return _q(round(u / grid.step) * grid.step)


def from_pieces(pieces: Iterable[tuple[float, float, float]], grid: GridSpec = GridSpec()) -> NCFD:
    """Discretize a piecewise-constant degree ``grade/[lo, hi]``.

    Each piece contributes one point: its grade placed at the piece midpoint
    snapped to the grid.  Endpoint openness does not matter here.
    """
    raw = [(_snap((lo + hi) / 2, grid), g) for lo, hi, g in pieces]
    if not raw:
        raise EmptySupport("no pieces to discretize")
    return canonicalize(raw)


def vote_pieces(intervals: Sequence[tuple[float, float]]) -> list[tuple[float, float, float]]:
    """Split the union of ``intervals`` at their endpoints; grade each segment
    by the share of intervals that cover it."""
    if not intervals:
        raise EmptySupport("no intervals to aggregate")
    for lo, hi in intervals:
        if lo > hi + TOL:
            raise InvalidInterval(f"[{lo}, {hi}] is reversed")
    cuts = sorted({_q(x) for iv in intervals for x in iv})
    out = []
    for lo, hi in zip(cuts, cuts[1:]):
        m = (lo + hi) / 2
        hits = sum(1 for a, b in intervals if a - TOL <= m <= b + TOL)
        if hits:
            out.append((lo, hi, _q(hits / len(intervals))))
    if not out:  # every interval degenerate at one point
        out.append((cuts[0], cuts[0], 1.0))
    return out


def from_votes(intervals: Sequence[tuple[float, float]], grid: GridSpec = GridSpec()) -> NCFD:
    """Aggregate expert interval opinions into a grid-discretized degree."""
    return from_pieces(vote_pieces(intervals), grid)


def defuzzify_intervals(intervals: Sequence[tuple[float, float]]) -> float:
    """Average of interval midpoints (the premature type-1 reduction)."""
    return math.fsum((lo + hi) / 2 for lo, hi in intervals) / len(intervals)
