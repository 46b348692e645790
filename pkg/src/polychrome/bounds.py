"""Upper and lower bounds on polychromatic numbers.

``pig_bound`` sums the per-level maximum number of cells over the shapes of a
sequence (the counting bound for colorings of shape sequences).
``partition_intervals`` is the column-partition procedure from the proof of
that bound, run on an explicit colored region; it returns either the
partition for one color or an instance of the sequence missing that color.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb, prod
from typing import Sequence

from polychrome.colorings import Coloring
from polychrome.grid import ShapeSequence, level, row_profile


@dataclass(frozen=True)
class BoundReport:
    kind: str
    value: int
    d: int | None = None
    i: int | None = None
    puncture: str = "none"
    detail: tuple[int, ...] = field(default=())

    def to_line(self) -> str:
        out = f"{self.kind} d={self.d} i={self.i} puncture={self.puncture} value={self.value}"
        if self.detail:
            out += f" levels={','.join(map(str, self.detail))}"
        return out

    def csv_row(self) -> str:
        return f"{self.d},{self.i},{self.puncture},{self.kind},{self.value}"


BOUND_CSV_HEADER = "d,i,puncture,kind,value"


def pig_bound(seq: ShapeSequence) -> BoundReport:
    profile = row_profile(seq)
    if not profile:
        raise ValueError("the shape sequence has no cells")
    return BoundReport("pig", sum(profile), seq.d, seq.i, seq.puncture.kind, profile)


def qd_closed_form(d: int) -> int:
    """Polychromatic number of Q_d for edge colorings."""
    if d < 1:
        raise ValueError("d must be at least 1")
    return (d + 1) ** 2 // 4 if d % 2 else d * (d + 2) // 4


def binomial_upper(d: int, i: int) -> int:
    if not 1 <= i <= d:
        raise ValueError(f"need 1 <= i <= d, got d={d}, i={i}")
    return comb(d + 1, i + 1)


def max_product_lower(d: int, i: int) -> int:
    """Largest product of i+1 positive integers summing to d+1 (exhaustive)."""
    if not 1 <= i <= d:
        raise ValueError(f"need 1 <= i <= d, got d={d}, i={i}")
    if i + 1 > 12:
        raise ValueError("composition search is limited to i+1 <= 12 parts")
    best = 0
    # compositions of d+1 into i+1 parts <-> choices of i cut points in 1..d
    for cuts in combinations(range(1, d + 1), i):
        bounds = (0, *cuts, d + 1)
        best = max(best, prod(b - a for a, b in zip(bounds, bounds[1:])))
    return best


# -- the column-partition procedure ---------------------------------------------

Offsets = Sequence[tuple[int, int]]


def sequence_offsets(seq: ShapeSequence) -> list[list[tuple[int, int]]]:
    """Shapes of an edge sequence as (column offset, row offset) lists.

    Columns are the first cell coordinate, rows are levels; both are taken
    relative to the shape's own leftmost column and the sequence's lowest level.
    """
    if seq.i != 1:
        raise ValueError("column partitions are defined for edge colorings (i = 1)")
    lo = seq.levels[0]
    out = []
    for s in seq.shapes:
        left = min(c[0] for c, _ in s.cells)
        out.append(sorted((c[0] - left, level(c) - lo) for c, _ in s.cells))
    return out


def grid_region(coloring: Coloring, rows: int, columns: int, base_level: int | None = None) -> list[list[int]]:
    """Colors of a rows x columns region: entry [row][col] is the cell (col, level - col).

    Columns are 0-based here; ``base_level`` defaults to ``columns`` so every
    cell has a non-negative second coordinate.
    """
    base = columns if base_level is None else base_level
    return [[coloring((c, base + r - c)) for c in range(columns)] for r in range(rows)]


@dataclass(frozen=True)
class PartitionResult:
    """Cut points c_1 <= ... <= c_k (1-based columns) or a violating instance.

    ``intervals`` are [1, c_1), [c_1, c_2), ..., [c_{k-1}, n].
    """

    color: int
    cuts: tuple[int, ...]
    intervals: tuple[tuple[int, int], ...]
    violation: tuple[int, ...] | None = None

    @property
    def ok(self) -> bool:
        return self.violation is None


def _copy_has(region, shape: Offsets, col: int, color: int) -> bool:
    return any(region[r][col - 1 + dc] == color for dc, r in shape)


def partition_intervals(region: Sequence[Sequence[int]], shapes: Sequence[Offsets], color: int) -> PartitionResult:
    """Split columns 1..n so every copy of shape j located in interval j has ``color``.

    A copy of a shape is located at the column of its leftmost cell and must
    fit inside the region.  If the last shape still has a copy without the
    color, the locations found so far form an instance of the sequence that
    misses the color; it is returned as ``violation``.
    """
    n = len(region[0])
    widths = [max(dc for dc, _ in s) for s in shapes]
    if any(r >= len(region) for s in shapes for _, r in s):
        raise ValueError("the region has fewer rows than the shape sequence")
    cuts = [1]
    for alpha, shape in enumerate(shapes, start=1):
        last = n - widths[alpha - 1]
        bad = next(
            (c for c in range(cuts[-1], last + 1) if not _copy_has(region, shape, c, color)),
            None,
        )
        if bad is None:
            cuts.append(n)
            bounds = cuts
            return PartitionResult(
                color, tuple(cuts[1:]), tuple(zip(bounds[:-1], bounds[1:]))
            )
        cuts.append(bad)
    return PartitionResult(color, tuple(cuts[1:]), (), violation=tuple(cuts[1:]))
