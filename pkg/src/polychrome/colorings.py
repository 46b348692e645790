"""Simple colorings of the cell grid.

Two representations:

* ``ModularFormulaColoring`` -- color(x) = (sum_j c_j x_j + offsets[x_k mod t]) mod m,
  where k is ``offset_coord`` (1-based, as in x_1 .. x_{i+1}) and the offsets
  term is absent when ``offset_coord`` is None.  Every explicit construction in
  the catalog is of this form.
* ``TableColoring`` -- an explicit color per cell up to a maximum level.  Search
  results come out in this form.  Looking up a cell above the window raises.

Colors are always 0 .. m-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, lcm
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from polychrome.grid import Cell, cells_in_window, level


class OutOfWindowError(ValueError):
    """A table coloring was asked for a cell above its window."""


@dataclass(frozen=True)
class ModularFormulaColoring:
    coeffs: tuple[int, ...]
    modulus: int
    offset_coord: int | None = None
    offset_period: int = 1
    offsets: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        object.__setattr__(self, "offsets", tuple(int(c) for c in self.offsets))
        if not self.coeffs:
            raise ValueError("a coloring needs at least one coordinate")
        if self.modulus < 1:
            raise ValueError("palette size must be positive")
        if self.offset_coord is None:
            if self.offsets or self.offset_period != 1:
                raise ValueError("offsets given without an offset coordinate")
        else:
            if not 1 <= self.offset_coord <= len(self.coeffs):
                raise ValueError(f"offset coordinate {self.offset_coord} out of range")
            if self.offset_period < 1 or len(self.offsets) != self.offset_period:
                raise ValueError("need exactly offset_period offsets")

    @property
    def arity(self) -> int:
        return len(self.coeffs)

    @property
    def palette_size(self) -> int:
        return self.modulus

    def __call__(self, cell: Sequence[int]) -> int:
        if len(cell) != self.arity:
            raise ValueError(f"cell {tuple(cell)} has arity {len(cell)}, coloring expects {self.arity}")
        v = sum(c * x for c, x in zip(self.coeffs, cell))
        if self.offset_coord is not None:
            v += self.offsets[cell[self.offset_coord - 1] % self.offset_period]
        return v % self.modulus


@dataclass(frozen=True)
class TableColoring:
    arity: int
    window: int
    palette_size: int
    table: Mapping[Cell, int]

    def __post_init__(self) -> None:
        if self.palette_size < 1:
            raise ValueError("palette size must be positive")
        expected = set(cells_in_window(self.arity, self.window))
        keys = set(self.table)
        if keys != expected:
            missing = sorted(expected - keys)[:3]
            extra = sorted(keys - expected)[:3]
            raise ValueError(f"table must cover exactly the window (missing {missing}, extra {extra})")
        bad = [c for c, v in self.table.items() if not 0 <= v < self.palette_size]
        if bad:
            raise ValueError(f"colors out of palette at {bad[:3]}")

    def __call__(self, cell: Sequence[int]) -> int:
        cell = tuple(cell)
        if len(cell) != self.arity:
            raise ValueError(f"cell {cell} has arity {len(cell)}, coloring expects {self.arity}")
        if level(cell) > self.window:
            raise OutOfWindowError(f"cell {cell} lies above the window (level {self.window})")
        return self.table[cell]


Coloring = Union[ModularFormulaColoring, TableColoring]


def evaluate(c: Coloring, cell: Sequence[int]) -> int:
    return c(cell)


def evaluate_many(c: Coloring, cells: np.ndarray) -> np.ndarray:
    """Colors of the rows of an (N, arity) integer array."""
    cells = np.asarray(cells, dtype=np.int64)
    if cells.ndim != 2 or cells.shape[1] != c.arity:
        raise ValueError(f"expected an (N, {c.arity}) array of cells")
    if isinstance(c, ModularFormulaColoring):
        v = cells @ np.asarray(c.coeffs, dtype=np.int64)
        if c.offset_coord is not None:
            offs = np.asarray(c.offsets, dtype=np.int64)
            v = v + offs[cells[:, c.offset_coord - 1] % c.offset_period]
        return v % c.modulus
    uniq, inverse = np.unique(cells, axis=0, return_inverse=True)
    colors = np.array([c(tuple(int(x) for x in row)) for row in uniq], dtype=np.int64)
    return colors[inverse.reshape(-1)]


def period_of(c: Coloring) -> tuple[int, ...]:
    """Per-coordinate periods: shifting x_j by P_j never changes the color."""
    if not isinstance(c, ModularFormulaColoring):
        raise ValueError("only formula colorings are periodic")
    return tuple(
        lcm(c.modulus, c.offset_period) if c.offset_coord == j + 1 else c.modulus
        for j in range(c.arity)
    )


def project(c: Coloring, j: int) -> Coloring:
    """Coloring of arity + j that ignores the last j coordinates."""
    if j < 1:
        raise ValueError("projection needs j >= 1")
    if isinstance(c, ModularFormulaColoring):
        return ModularFormulaColoring(
            c.coeffs + (0,) * j, c.modulus, c.offset_coord, c.offset_period, c.offsets
        )
    table = {cell: c.table[cell[: c.arity]] for cell in cells_in_window(c.arity + j, c.window)}
    return TableColoring(c.arity + j, c.window, c.palette_size, table)


def constant_coloring(arity: int) -> ModularFormulaColoring:
    return ModularFormulaColoring((0,) * arity, 1)


def uniform_shift_holds(c: Coloring) -> bool:
    """Whether moving x_1 or x_{i+1} by one shifts every color by a constant.

    This is what lets a residue check pin the outer gaps to zero.
    """
    return isinstance(c, ModularFormulaColoring) and c.offset_coord not in (1, c.arity)


# -- catalog ------------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: tuple[str, ...]
    build: Callable[..., ModularFormulaColoring]
    target: Callable[..., tuple[int, int, str]]
    summary: str


def _pd_lower(d: int) -> ModularFormulaColoring:
    if d < 1:
        raise ValueError("pd_lower needs d >= 1")
    q = (d + 1) ** 2 // 4 if d % 2 else d * (d + 2) // 4
    return ModularFormulaColoring((ceil((d + 1) / 2), 1), q)


def _qmv(k: int) -> ModularFormulaColoring:
    if k < 2:
        raise ValueError("qmv needs k >= 2")
    return ModularFormulaColoring((k, 1), k * k - 1)


def _pq2kmv(k: int) -> ModularFormulaColoring:
    if k < 3:
        raise ValueError("pq2kmv needs k >= 3")
    return ModularFormulaColoring((k, 1), (k - 1) * (k + 2))


CATALOG: dict[str, CatalogEntry] = {
    e.name: e
    for e in [
        CatalogEntry("pd_lower", ("d",), _pd_lower, lambda d: (d, 1, "none"),
                     "ceil((d+1)/2)*l + r mod p(Q_d); Q_d-polychromatic edge coloring"),
        CatalogEntry("qmv", ("k",), _qmv, lambda k: (2 * k - 1, 1, "vertex"),
                     "k*l + r mod k^2-1; odd punctured cubes Q_{2k-1} minus a vertex"),
        CatalogEntry("p4mv", (), lambda: ModularFormulaColoring((3, 1), 5), lambda: (4, 1, "vertex"),
                     "3*l + r mod 5; Q_4 minus a vertex"),
        CatalogEntry("p4me", (), lambda: ModularFormulaColoring((4, 1), 6), lambda: (4, 1, "edge"),
                     "4*l + r mod 6; Q_4 minus an edge"),
        CatalogEntry("pq2kmv", ("k",), _pq2kmv, lambda k: (2 * k, 1, "vertex"),
                     "k*l + r mod (k-1)(k+2); even punctured cubes Q_{2k} minus a vertex"),
        CatalogEntry("p233", (), lambda: ModularFormulaColoring((1, 1, 1), 3, 2, 2, (0, 1)),
                     lambda: (3, 2, "none"),
                     "x1+x2+x3 (+1 if x2 odd) mod 3; Q_2's so every Q_3 sees 3 colors"),
        CatalogEntry("p24", (), lambda: ModularFormulaColoring((1, 1, 1), 5, 2, 3, (0, 1, 2)),
                     lambda: (4, 2, "none"),
                     "x1+x2+x3 + (x2 mod 3) mod 5; Q_2's so every Q_4 sees 5 colors"),
    ]
}


def _check_params(name: str, params: Mapping[str, int]) -> CatalogEntry:
    if name not in CATALOG:
        raise ValueError(f"unknown catalog coloring {name!r}; known: {', '.join(CATALOG)}")
    entry = CATALOG[name]
    unknown = set(params) - set(entry.params)
    if unknown:
        raise ValueError(f"unknown parameter(s) {sorted(unknown)} for {name}")
    missing = set(entry.params) - set(params)
    if missing:
        raise ValueError(f"missing parameter(s) {sorted(missing)} for {name}")
    return entry


def catalog(name: str, **params: int) -> ModularFormulaColoring:
    """Named constructions, e.g. ``catalog("qmv", k=3)``."""
    return _check_params(name, params).build(**params)


def catalog_target(name: str, **params: int) -> tuple[int, int, str]:
    """(d, i, puncture kind) the named coloring is built for."""
    return _check_params(name, params).target(**params)


def parse_params(text: str) -> dict[str, int]:
    """``"k=3,d=4"`` -> ``{"k": 3, "d": 4}``."""
    out: dict[str, int] = {}
    for tok in filter(None, (t.strip() for t in text.split(","))):
        key, sep, val = tok.partition("=")
        if not sep:
            raise ValueError(f"malformed parameter {tok!r}; expected key=value")
        out[key.strip()] = int(val)
    return out


# -- spec files ---------------------------------------------------------------

def _ints(xs: Sequence[int]) -> str:
    return ",".join(str(x) for x in xs)


def format_coloring(c: Coloring) -> str:
    if isinstance(c, ModularFormulaColoring):
        lines = [
            "kind: formula",
            f"arity: {c.arity}",
            f"coeffs: {_ints(c.coeffs)}",
            f"modulus: {c.modulus}",
            f"offset_coord: {'none' if c.offset_coord is None else c.offset_coord}",
            f"offset_period: {c.offset_period}",
            f"offsets: {_ints(c.offsets) if c.offsets else 'none'}",
        ]
    else:
        lines = [
            "kind: table",
            f"arity: {c.arity}",
            f"palette: {c.palette_size}",
            f"window: {c.window}",
            "cells:",
        ]
        lines += [f"{_ints(cell)} -> {c.table[cell]}" for cell in cells_in_window(c.arity, c.window)]
    return "\n".join(lines) + "\n"


def parse_coloring(text: str) -> Coloring:
    lines = [ln.rstrip() for ln in text.splitlines() if ln.strip()]
    header: dict[str, str] = {}
    body: list[str] = []
    for k, ln in enumerate(lines):
        if ln == "cells:":
            body = lines[k + 1 :]
            break
        key, sep, val = ln.partition(":")
        if not sep:
            raise ValueError(f"malformed coloring line {ln!r}")
        header[key.strip()] = val.strip()
    kind = header.get("kind")
    try:
        if kind == "formula":
            coeffs = tuple(int(x) for x in header["coeffs"].split(","))
            if len(coeffs) != int(header["arity"]):
                raise ValueError("arity does not match coeffs")
            oc = header["offset_coord"]
            offs = header["offsets"]
            return ModularFormulaColoring(
                coeffs,
                int(header["modulus"]),
                None if oc == "none" else int(oc),
                int(header["offset_period"]),
                () if offs == "none" else tuple(int(x) for x in offs.split(",")),
            )
        if kind == "table":
            table = {}
            for ln in body:
                cell_txt, sep, color = ln.replace("→", "->").partition("->")
                if not sep:
                    raise ValueError(f"malformed table line {ln!r}")
                table[tuple(int(x) for x in cell_txt.split(","))] = int(color)
            return TableColoring(int(header["arity"]), int(header["window"]), int(header["palette"]), table)
    except KeyError as exc:
        raise ValueError(f"coloring spec is missing field {exc.args[0]!r}") from None
    raise ValueError(f"unknown coloring kind {kind!r}")
