"""Linear algebra over F2 with Python ints as bitset rows."""
from __future__ import annotations

from typing import Dict, Iterable, List, Sequence, Union

Row = Union[int, Sequence[int]]


def _as_int(row: Row) -> int:
    if isinstance(row, int):
        return row
    v = 0
    for j, bit in enumerate(row):
        if bit & 1:
            v |= 1 << j
    return v


def f2_rank(rows: Iterable[Row]) -> int:
    """Rank over F2 of a matrix given as bitset ints or 0/1 sequences."""
    pivots: Dict[int, int] = {}
    rank = 0
    for r in rows:
        v = _as_int(r)
        while v:
            top = v.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = v
                rank += 1
                break
            v ^= p
    return rank


def f2_matrix_rank(mat: Sequence[Sequence[int]]) -> int:
    return f2_rank(mat)


class ColumnReducer:
    """Incremental left-to-right column reduction (persistence style).

    Columns are added in filtration order; each is reduced against earlier
    reduced columns by its lowest (highest-index) nonzero entry.  Columns of
    a prefix therefore reduce to the same thing regardless of what is added
    later, which is what lets truncation ranks be read off one reduction.
    """

    def __init__(self):
        self.pivot: Dict[int, int] = {}   # low row -> reduced column
        self.lows: List[int] = []         # per column: low row or -1

    def add(self, col: int) -> int:
        pivot = self.pivot
        while col:
            low = col.bit_length() - 1
            p = pivot.get(low)
            if p is None:
                pivot[low] = col
                self.lows.append(low)
                return low
            col ^= p
        self.lows.append(-1)
        return -1
