"""The grid of cells (color classes), shapes and shape sequences.

A cell is the gap vector of a colored i-subcube, i.e. a point of the
(i+1)-dimensional grid; its level is the coordinate sum.  An embedding of Q_d
with host gap vector ``a`` contributes one shape per i-subset T of its stars.
The shape is a parallelepiped: coordinate j starts at the sum of the host gaps
inside the j-th gap of T and spans (non-T stars in that gap) + 1 cells.  The
multiplicity of offset s is prod_j C(dims_j - 1, s_j), the number of ways to
place s_j ones on the non-T stars of gap j.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import combinations, product
from math import comb, prod
from typing import Iterable, Sequence

from polychrome.core import NO_PUNCTURE, STAR, PunctureSpec, check_puncture

Cell = tuple[int, ...]


def level(cell: Sequence[int]) -> int:
    return sum(cell)


def parallelepiped(origin: Sequence[int], dims: Sequence[int]) -> frozenset[Cell]:
    """The cells ``origin + alpha`` with ``0 <= alpha_k < dims_k``."""
    if len(origin) != len(dims):
        raise ValueError("origin and dims must have the same length")
    if any(j < 1 for j in dims):
        raise ValueError(f"parallelepiped dimensions must be positive, got {tuple(dims)}")
    return frozenset(
        tuple(o + a for o, a in zip(origin, alpha))
        for alpha in product(*(range(j) for j in dims))
    )


@dataclass(frozen=True)
class MultiShape:
    """One shape of a sequence: the cells hit by the i-subcubes on ``star_set``.

    ``cells`` holds (cell, multiplicity) pairs in sorted order; ``star_set`` is
    0-based over the host's stars.
    """

    star_set: tuple[int, ...]
    origin: Cell
    dims: tuple[int, ...]
    cells: tuple[tuple[Cell, int], ...]

    @property
    def label(self) -> str:
        return "S" + "".join(str(t + 1) for t in self.star_set)

    @property
    def support(self) -> frozenset[Cell]:
        return frozenset(c for c, _ in self.cells)

    def multiplicity(self, cell: Cell) -> int:
        return dict(self.cells).get(tuple(cell), 0)

    @property
    def total(self) -> int:
        return sum(m for _, m in self.cells)

    @property
    def width(self) -> int:
        cols = [c[0] for c, _ in self.cells]
        return max(cols) - min(cols) if cols else 0

    def offsets(self) -> list[Cell]:
        """Surviving cells relative to the origin, in sorted order."""
        return [tuple(x - o for x, o in zip(c, self.origin)) for c, _ in self.cells]


@dataclass(frozen=True)
class ShapeSequence:
    """The shapes of one embedding of Q_d (or a punctured Q_d), colored as Q_i's."""

    d: int
    i: int
    gaps: tuple[int, ...]
    shapes: tuple[MultiShape, ...]
    puncture: PunctureSpec = field(default=NO_PUNCTURE)

    @property
    def width(self) -> int:
        return max((s.width for s in self.shapes), default=0)

    @property
    def levels(self) -> tuple[int, int] | None:
        """(lowest, highest) occupied level, or None if no cell survives."""
        lv = [level(c) for s in self.shapes for c, _ in s.cells]
        return (min(lv), max(lv)) if lv else None

    @property
    def height(self) -> int:
        lv = self.levels
        return 0 if lv is None else lv[1] - lv[0] + 1

    def cell_multiset(self) -> dict[Cell, int]:
        out: dict[Cell, int] = {}
        for s in self.shapes:
            for c, m in s.cells:
                out[c] = out.get(c, 0) + m
        return out

    def to_text(self) -> str:
        return format_sequence(self)


def _t_gaps(star_set: Sequence[int], d: int) -> list[tuple[int, int]]:
    """Bounds (lo, hi) of host gap indices inside each gap of ``star_set``.

    Host gap k (0-based) lies between host stars k-1 and k; the j-th gap of T
    covers host gaps t_{j-1}+1 .. t_j (with t_0 = -1, t_{i+1} = d).
    """
    bounds = [-1, *star_set, d]
    return [(bounds[j] + 1, bounds[j + 1]) for j in range(len(bounds) - 1)]


def shape_sequence(gaps: Sequence[int], i: int) -> ShapeSequence:
    """Shape sequence of any embedding of Q_d whose gap vector is ``gaps``."""
    gaps = tuple(gaps)
    d = len(gaps) - 1
    if not 1 <= i <= d:
        raise ValueError(f"need 1 <= i <= d, got i={i}, d={d}")
    if any(g < 0 for g in gaps):
        raise ValueError(f"gap vector entries must be non-negative: {gaps}")
    shapes = []
    for star_set in combinations(range(d), i):
        spans = _t_gaps(star_set, d)
        origin = tuple(sum(gaps[lo : hi + 1]) for lo, hi in spans)
        dims = tuple(hi - lo + 1 for lo, hi in spans)
        cells = tuple(
            (tuple(o + s for o, s in zip(origin, offset)), prod(comb(j - 1, s) for j, s in zip(dims, offset)))
            for offset in product(*(range(j) for j in dims))
        )
        shapes.append(MultiShape(star_set, origin, dims, tuple(sorted(cells))))
    return ShapeSequence(d, i, gaps, tuple(shapes))


def _deleted_offset(star_set: Sequence[int], d: int, word: str) -> Cell:
    """Offset of the subcube on ``star_set`` whose other star bits follow ``word``."""
    return tuple(
        sum(1 for k in range(lo, hi) if word[k] == "1") for lo, hi in _t_gaps(star_set, d)
    )


def apply_puncture(seq: ShapeSequence, puncture: PunctureSpec) -> ShapeSequence:
    """Remove the subcubes destroyed by deleting a vertex or an edge.

    Deleting a vertex removes one subcube from every shape; deleting an edge
    removes one subcube from each shape whose star set contains the edge's star.
    Cells whose multiplicity drops to zero disappear.
    """
    check_puncture(puncture, seq.d)
    if puncture.pattern is None:
        return seq
    word = puncture.pattern.word
    edge_star = word.index(STAR) if puncture.kind == "edge" else None
    shapes = []
    for s in seq.shapes:
        if edge_star is not None and edge_star not in s.star_set:
            shapes.append(s)
            continue
        offset = _deleted_offset(s.star_set, seq.d, word)
        target = tuple(o + x for o, x in zip(s.origin, offset))
        cells = []
        for c, m in s.cells:
            if c == target:
                m -= 1
            if m > 0:
                cells.append((c, m))
        shapes.append(replace(s, cells=tuple(cells)))
    return replace(seq, shapes=tuple(shapes), puncture=puncture)


def row_profile(seq: ShapeSequence) -> tuple[int, ...]:
    """Per occupied level, the largest number of distinct cells any shape has there."""
    lv = seq.levels
    if lv is None:
        return ()
    lo, hi = lv
    profile = [0] * (hi - lo + 1)
    for s in seq.shapes:
        counts = [0] * len(profile)
        for c, _ in s.cells:
            counts[level(c) - lo] += 1
        profile = [max(a, b) for a, b in zip(profile, counts)]
    return tuple(profile)


# -- text serialization -------------------------------------------------------

def _ints(xs: Iterable[int]) -> str:
    return ",".join(str(x) for x in xs)


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",")) if text else ()


def format_sequence(seq: ShapeSequence) -> str:
    lines = [f"shape-sequence d={seq.d} i={seq.i} gaps={_ints(seq.gaps)} puncture={seq.puncture}"]
    for s in seq.shapes:
        cells = " ".join(f"{_ints(c)}:{m}" for c, m in s.cells)
        lines.append(
            f"shape stars={_ints(t + 1 for t in s.star_set)} origin={_ints(s.origin)} "
            f"dims={_ints(s.dims)} cells={cells}"
        )
    return "\n".join(lines) + "\n"


def parse_sequence(text: str) -> ShapeSequence:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("shape-sequence "):
        raise ValueError("not a shape-sequence document")
    head = dict(tok.split("=", 1) for tok in lines[0].split()[1:])
    shapes = []
    for ln in lines[1:]:
        body, _, cells_txt = ln.partition(" cells=")
        fields = dict(tok.split("=", 1) for tok in body.split()[1:])
        cells = []
        for tok in cells_txt.split():
            c, _, m = tok.rpartition(":")
            cells.append((_parse_ints(c), int(m)))
        shapes.append(
            MultiShape(
                tuple(t - 1 for t in _parse_ints(fields["stars"])),
                _parse_ints(fields["origin"]),
                _parse_ints(fields["dims"]),
                tuple(cells),
            )
        )
    return ShapeSequence(
        int(head["d"]),
        int(head["i"]),
        _parse_ints(head["gaps"]),
        tuple(shapes),
        PunctureSpec.parse(head["puncture"]),
    )


def cells_in_window(arity: int, window: int) -> list[Cell]:
    """All cells of the given arity with level <= window, level-then-lex ordered."""
    if arity < 1 or window < 0:
        raise ValueError(f"invalid window arity={arity}, level={window}")
    out: list[Cell] = []
    for lv in range(window + 1):
        out.extend(sorted(_compositions(lv, arity)))
    return out


def _compositions(total: int, parts: int) -> Iterable[Cell]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)
