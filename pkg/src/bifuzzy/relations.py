"""Type-2 fuzzy relations: vectors and matrices over NCFDs.

Matrices compose with the meet-join product (``⊔`` of pairwise ``⊓``) and
combine with the block tensor used for parallel composition.  Vectors are
plain tuples of :class:`~bifuzzy.ncfd.NCFD` so they hash cleanly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from bifuzzy.errors import DimensionMismatch
from bifuzzy.ncfd import BOTTOM, NCFD, TOP, as_ncfd, join, meet

NcfdVector = tuple[NCFD, ...]


def vector(entries: Iterable[NCFD | str | float]) -> NcfdVector:
    out = tuple(as_ncfd(e) for e in entries)
    if not out:
        raise DimensionMismatch("vector must have at least one entry")
    return out


@dataclass(frozen=True)
class NcfdMatrix:
    """Dense ``m × n`` matrix of NCFDs, stored row-major as nested tuples."""

    rows: tuple[tuple[NCFD, ...], ...]

    def __post_init__(self) -> None:
        if not self.rows or not self.rows[0]:
            raise DimensionMismatch("matrix must be at least 1x1")
        width = len(self.rows[0])
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise DimensionMismatch(f"row {i} has {len(row)} entries, expected {width}")

    @classmethod
    def of(cls, rows: Iterable[Iterable[NCFD | str | float]]) -> NcfdMatrix:
        return cls(tuple(tuple(as_ncfd(e) for e in row) for row in rows))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij: tuple[int, int]) -> NCFD:
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> NcfdVector:
        return tuple(row[j] for row in self.rows)

    def __matmul__(self, other: NcfdMatrix) -> NcfdMatrix:
        return compose(self, other)

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.rows)


def _dot(xs: Sequence[NCFD], ys: Sequence[NCFD]) -> NCFD:
    acc = BOTTOM
    for x, y in zip(xs, ys):
        acc = join(acc, meet(x, y))
    return acc


def compose(a: NcfdMatrix, b: NcfdMatrix) -> NcfdMatrix:
    """Meet-join product: ``(a ⊙ b)[x, z] = ⊔_y a[x, y] ⊓ b[y, z]``."""
    m, n = a.shape
    n2, k = b.shape
    if n != n2:
        raise DimensionMismatch(f"cannot compose {m}x{n} with {n2}x{k}")
    cols = [b.column(j) for j in range(k)]
    return NcfdMatrix(tuple(tuple(_dot(row, col) for col in cols) for row in a.rows))


def vec_compose(v: Sequence[NCFD], a: NcfdMatrix) -> NcfdVector:
    """Row vector times matrix, ``v ⊙ a``."""
    m, k = a.shape
    if len(v) != m:
        raise DimensionMismatch(f"vector of length {len(v)} against {m}x{k} matrix")
    return tuple(_dot(v, a.column(j)) for j in range(k))


def dot(v: Sequence[NCFD], w: Sequence[NCFD]) -> NCFD:
    """``v ⊙ wᵀ`` for two row vectors of equal length."""
    if len(v) != len(w):
        raise DimensionMismatch(f"vectors of length {len(v)} and {len(w)}")
    return _dot(v, w)


def tensor(a: NcfdMatrix, b: NcfdMatrix) -> NcfdMatrix:
    """Block tensor: block ``(i, j)`` is ``a[i, j] ⊓ b`` taken entrywise."""
    m, n = a.shape
    k, l = b.shape
    rows = []
    for i in range(m):
        for p in range(k):
            rows.append(tuple(meet(a.rows[i][j], b.rows[p][q]) for j in range(n) for q in range(l)))
    return NcfdMatrix(tuple(rows))


def vec_tensor(v: Sequence[NCFD], w: Sequence[NCFD]) -> NcfdVector:
    return tuple(meet(x, y) for x in v for y in w)


def all_ones_vector(n: int) -> NcfdVector:
    if n < 1:
        raise DimensionMismatch("n must be >= 1")
    return (TOP,) * n


def identity_matrix(n: int) -> NcfdMatrix:
    if n < 1:
        raise DimensionMismatch("n must be >= 1")
    return NcfdMatrix(tuple(tuple(TOP if i == j else BOTTOM for j in range(n)) for i in range(n)))


def row_matrix(v: Sequence[NCFD]) -> NcfdMatrix:
    return NcfdMatrix((tuple(v),))
