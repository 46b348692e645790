"""Backtracking search for polychromatic colorings.

Both searches reduce to the same problem: color a set of variables with r
colors so that every constraint (a tuple of variables) sees all r colors.

* ``search_simple`` -- variables are the cells of a window (levels <= L); one
  constraint per gap vector whose shape sequence fits in the window.  A verdict
  only speaks about colorings restricted to that window.
* ``search_concrete`` -- variables are the Q_i's of a fixed Q_n; one
  constraint per embedding of Q_d (and per deletion for punctured targets).
  No simplicity assumption.

Pruning: a constraint fails once its missing colors outnumber its unassigned
variables, and when they are equal every unassigned variable is restricted to
the missing colors.  Color symmetry is broken by first appearance: a variable
may only take a color already used or the next unused one.  Fixed assignments
switch this off.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Sequence

from polychrome.colorings import TableColoring
from polychrome.core import StarPattern, enumerate_subcubes, puncture_choices, sub_subcubes
from polychrome.grid import Cell, apply_puncture, cells_in_window, shape_sequence
from polychrome.verify import TargetSpec, verify_concrete

SAT = "SAT"
UNSAT = "UNSAT"
EXHAUSTED = "EXHAUSTED-ENUMERATION"
MODES = ("first", "all", "refute")


@dataclass
class Budget:
    """Search limits; exceeding either ends the search as exhausted."""

    max_nodes: int | None = None
    max_seconds: float | None = None


@dataclass
class SearchOutcome:
    status: str
    solutions: list = field(default_factory=list)
    nodes: int = 0
    seconds: float = 0.0
    complete: bool = True

    def to_text(self) -> str:
        # no timing here, so identical runs give identical text
        return (
            f"status: {self.status}\n"
            f"solutions: {len(self.solutions)}\n"
            f"complete: {str(self.complete).lower()}\n"
            f"nodes: {self.nodes}\n"
        )


class _BudgetExceeded(Exception):
    pass


class CoverSearch:
    """Backtracking over variables with the all-colors-covered constraints.

    ``order`` is the static variable order; with ``dynamic=True`` the variable
    with the smallest remaining domain is taken next (ties by ``order``).
    """

    def __init__(
        self,
        n_vars: int,
        constraints: Sequence[Sequence[int]],
        r: int,
        order: Sequence[int] | None = None,
        fixed: Mapping[int, int] | None = None,
        dynamic: bool = False,
    ):
        if r < 1:
            raise ValueError("palette size must be positive")
        self.n_vars = n_vars
        self.r = r
        self.full = (1 << r) - 1
        self.constraints = [tuple(dict.fromkeys(c)) for c in constraints]
        self.cons_of: list[list[int]] = [[] for _ in range(n_vars)]
        for k, c in enumerate(self.constraints):
            for v in c:
                self.cons_of[v].append(k)
        self.order = list(range(n_vars)) if order is None else list(order)
        if sorted(self.order) != list(range(n_vars)):
            raise ValueError("order must be a permutation of the variables")
        self.fixed = dict(fixed or {})
        for v, c in self.fixed.items():
            if not 0 <= c < r:
                raise ValueError(f"fixed color {c} outside palette of size {r}")
        self.pin = not self.fixed
        self.dynamic = dynamic
        self.nodes = 0

    def solve(self, mode: str = "first", cap: int | None = None, budget: Budget | None = None) -> SearchOutcome:
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        budget = budget or Budget()
        self._deadline = None if budget.max_seconds is None else time.monotonic() + budget.max_seconds
        self._max_nodes = budget.max_nodes
        self._mode = mode
        self._cap = cap
        self.nodes = 0
        self.solutions: list[tuple[int, ...]] = []
        start = time.monotonic()
        color = [-1] * self.n_vars
        dom = [self.full] * self.n_vars
        present = [0] * len(self.constraints)
        open_ = [len(c) for c in self.constraints]
        if any(len(c) < self.r for c in self.constraints):
            return SearchOutcome(UNSAT, [], 0, time.monotonic() - start)
        state = (color, dom, present, open_)
        complete = True
        try:
            ok = True
            for v, c in self.fixed.items():
                if color[v] >= 0 or not self._assign(state, v, c):
                    ok = False
                    break
            if ok:
                self._dfs(state, -1)
        except _BudgetExceeded:
            complete = False
        except _Stop:
            pass
        elapsed = time.monotonic() - start
        if self.solutions:
            status = SAT
        elif complete:
            status = UNSAT
        else:
            status = EXHAUSTED
        return SearchOutcome(status, list(self.solutions), self.nodes, elapsed, complete)

    def _assign(self, state, v: int, c: int) -> bool:
        color, dom, present, open_ = state
        bit = 1 << c
        if not dom[v] & bit:
            return False
        color[v] = c
        dom[v] = bit
        for k in self.cons_of[v]:
            present[k] |= bit
            open_[k] -= 1
            miss = self.full & ~present[k]
            need = miss.bit_count()
            if need > open_[k]:
                return False
            if need and need == open_[k]:
                for u in self.constraints[k]:
                    if color[u] < 0:
                        nd = dom[u] & miss
                        if not nd:
                            return False
                        dom[u] = nd
        return True

    def _pick(self, color, dom) -> int:
        if not self.dynamic:
            for v in self.order:
                if color[v] < 0:
                    return v
            return -1
        best, best_key = -1, None
        for v in self.order:
            if color[v] < 0:
                key = dom[v].bit_count()
                if best_key is None or key < best_key:
                    best, best_key = v, key
                    if key <= 1:
                        break
        return best

    def _dfs(self, state, max_used: int) -> None:
        self.nodes += 1
        if self._max_nodes is not None and self.nodes > self._max_nodes:
            raise _BudgetExceeded
        if self._deadline is not None and self.nodes % 1024 == 0 and time.monotonic() > self._deadline:
            raise _BudgetExceeded
        color, dom, present, open_ = state
        v = self._pick(color, dom)
        if v < 0:
            self._record(color)
            return
        limit = min(self.r, max_used + 2) if self.pin else self.r
        for c in range(limit):
            if not dom[v] >> c & 1:
                continue
            child = (color.copy(), dom.copy(), present.copy(), open_.copy())
            if self._assign(child, v, c):
                self._dfs(child, max(max_used, c))

    def _record(self, color: list[int]) -> None:
        for c in self.constraints:
            seen = 0
            for v in c:
                seen |= 1 << color[v]
            if seen != self.full:  # pragma: no cover - propagation guarantees coverage
                raise AssertionError("search produced an invalid solution")
        self.solutions.append(tuple(color))
        if self._mode != "all" or (self._cap is not None and len(self.solutions) >= self._cap):
            raise _Stop


class _Stop(Exception):
    pass


# -- simple colorings on a window ------------------------------------------------

@dataclass(frozen=True)
class SimpleSearchProblem:
    """Simple r-colorings of the cells up to level ``window`` (Q_i cells, arity i+1).

    Constraints come from every gap vector with sum <= ``max_gap_sum``
    (default window - (d - i), the largest sum whose shapes stay in the window).
    """

    d: int
    i: int
    r: int
    window: int
    fixed: tuple[tuple[Cell, int], ...] = ()
    puncture: str = "none"
    max_gap_sum: int | None = None

    def __post_init__(self) -> None:
        TargetSpec(self.d, self.i, self.puncture)
        if self.r < 1:
            raise ValueError("palette size must be positive")
        top = self.window - (self.d - self.i)
        if self.max_gap_sum is None:
            object.__setattr__(self, "max_gap_sum", top)
        if self.max_gap_sum < 0 or self.max_gap_sum > top:
            raise ValueError(
                f"unsound window: gap sums up to {self.max_gap_sum} reach level "
                f"{self.max_gap_sum + self.d - self.i} > window {self.window}"
            )
        for cell, _ in self.fixed:
            if len(cell) != self.i + 1 or sum(cell) > self.window:
                raise ValueError(f"fixed cell {cell} is not in the window")

    @classmethod
    def for_host(cls, d: int, i: int, r: int, n: int, **kw) -> "SimpleSearchProblem":
        """Window covering exactly the embeddings of Q_d in Q_n."""
        return cls(d, i, r, n - i, **kw)

    def cells(self) -> list[Cell]:
        return cells_in_window(self.i + 1, self.window)

    def gap_vectors(self) -> list[tuple[int, ...]]:
        return [g for g in product(range(self.max_gap_sum + 1), repeat=self.d + 1) if sum(g) <= self.max_gap_sum]

    def constraints(self) -> list[tuple[Cell, ...]]:
        out = []
        seen = set()
        for gaps in self.gap_vectors():
            seq = shape_sequence(gaps, self.i)
            for D in puncture_choices(self.d, self.puncture):
                cells = tuple(sorted({c for s in apply_puncture(seq, D).shapes for c, _ in s.cells}))
                if cells not in seen:
                    seen.add(cells)
                    out.append(cells)
        return out


def search_simple(
    problem: SimpleSearchProblem,
    mode: str = "first",
    cap: int | None = None,
    budget: Budget | None = None,
    seed: int | None = None,
) -> SearchOutcome:
    """Search simple colorings of the window; solutions come back as tables.

    ``seed`` shuffles the variable order within each level (used to check that
    verdicts do not depend on the order).
    """
    cells = problem.cells()
    index = {c: k for k, c in enumerate(cells)}
    cons = [tuple(index[c] for c in con) for con in problem.constraints()]
    order = list(range(len(cells)))
    if seed is not None:
        rng = random.Random(seed)
        by_level: dict[int, list[int]] = {}
        for k in order:
            by_level.setdefault(sum(cells[k]), []).append(k)
        order = []
        for lv in sorted(by_level):
            block = by_level[lv]
            rng.shuffle(block)
            order += block
    fixed = {index[c]: col for c, col in problem.fixed}
    solver = CoverSearch(len(cells), cons, problem.r, order=order, fixed=fixed)
    out = solver.solve(mode, cap, budget)
    out.solutions = [
        TableColoring(problem.i + 1, problem.window, problem.r, dict(zip(cells, sol)))
        for sol in sorted(out.solutions)
    ]
    return out


# -- raw colorings of a concrete Q_n ---------------------------------------------

def concrete_constraints(n: int, target: TargetSpec) -> tuple[list[StarPattern], list[tuple[int, ...]]]:
    variables = list(enumerate_subcubes(n, target.i))
    index = {p: k for k, p in enumerate(variables)}
    cons = []
    for host in enumerate_subcubes(n, target.d):
        for D in target.deletions():
            cons.append(tuple(index[q] for q in sub_subcubes(host, target.i, D)))
    return variables, cons


def search_concrete(
    n: int,
    target: TargetSpec,
    r: int,
    budget: Budget | None = None,
    mode: str = "first",
    cap: int | None = None,
    seed: int | None = None,
) -> SearchOutcome:
    """Raw r-colorings of the Q_i's of Q_n making every (punctured) Q_d polychromatic.

    Solutions are color tuples aligned with ``enumerate_subcubes(n, i)``.
    The static order starts with the variables of the first embedding, so the
    first-appearance pinning lands there.
    """
    if n < target.d:
        raise ValueError(f"Q_{target.d} does not embed in Q_{n}")
    variables, cons = concrete_constraints(n, target)
    first = list(dict.fromkeys(cons[0])) if cons else []
    rest = [v for v in range(len(variables)) if v not in set(first)]
    if seed is not None:
        random.Random(seed).shuffle(rest)
    solver = CoverSearch(len(variables), cons, r, order=first + rest, dynamic=True)
    out = solver.solve(mode, cap, budget)
    out.solutions = sorted(out.solutions)
    for sol in out.solutions:
        if not verify_concrete(n, target, list(sol), palette=r):  # pragma: no cover
            raise AssertionError("concrete search returned a coloring that fails verification")
    return out
