"""Deciding whether a coloring is polychromatic for a (possibly punctured) Q_d.

Two independent routes:

``verify_concrete``
    Walks every embedding of Q_d in a fixed Q_n and every deletion, colors each
    surviving i-subcube from its concrete gap vector (or from a raw assignment)
    and checks that the whole palette shows up.  Knows nothing about shapes.

``verify_residues``
    For periodic simple colorings.  Colors are M-periodic in every host gap
    (M = lcm of the coloring's periods), so the host gap vectors in [0, M)^{d+1}
    cover every embedding in every Q_n.  Each one is checked through its shape
    sequence and ``apply_puncture``.  ``method="enumerate"`` walks the residues
    literally; ``method="search"`` (default) runs a pruned search over prefix
    sums with the same verdict and the same witness.

Witnesses are the first failure in lexicographic order: gap vector first (or
embedding index for the concrete route), then deletion index.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb, lcm
from typing import Iterator, Mapping, Sequence, Union

import numpy as np

from polychrome.colorings import (
    Coloring,
    ModularFormulaColoring,
    TableColoring,
    evaluate_many,
    period_of,
    uniform_shift_holds,
)
from polychrome.core import (
    PUNCTURE_KINDS,
    PunctureSpec,
    StarPattern,
    enumerate_subcubes,
    pattern_from_gaps,
    puncture_choices,
    sub_subcubes,
)
from polychrome.grid import apply_puncture, shape_sequence


@dataclass(frozen=True)
class TargetSpec:
    """Q_d colored as Q_i's; ``puncture`` quantifies over all deletions of that kind."""

    d: int
    i: int
    puncture: str = "none"

    def __post_init__(self) -> None:
        if not 1 <= self.i <= self.d:
            raise ValueError(f"need 1 <= i <= d, got d={self.d}, i={self.i}")
        if self.puncture not in PUNCTURE_KINDS:
            raise ValueError(f"unknown puncture kind {self.puncture!r}")

    @classmethod
    def parse(cls, text: str) -> "TargetSpec":
        """``"d=4,i=1,puncture=vertex"``; ``i`` defaults to 1."""
        fields: dict[str, str] = {}
        for tok in filter(None, (t.strip() for t in text.split(","))):
            key, sep, val = tok.partition("=")
            if not sep or key not in ("d", "i", "puncture"):
                raise ValueError(f"bad target component {tok!r}")
            fields[key] = val
        if "d" not in fields:
            raise ValueError("target needs d=")
        return cls(int(fields["d"]), int(fields.get("i", 1)), fields.get("puncture", "none"))

    def __str__(self) -> str:
        return f"d={self.d},i={self.i},puncture={self.puncture}"

    def deletions(self) -> list[PunctureSpec]:
        return puncture_choices(self.d, self.puncture)


@dataclass(frozen=True)
class Witness:
    """A failing instance: embedding (concrete) or gap vector (residue) plus deletion."""

    puncture: PunctureSpec
    colors: frozenset[int]
    gaps: tuple[int, ...] | None = None
    embedding: StarPattern | None = None

    @property
    def pattern(self) -> StarPattern:
        return self.embedding if self.embedding is not None else pattern_from_gaps(self.gaps)


@dataclass(frozen=True)
class Verdict:
    polychromatic: bool
    palette_size: int
    mode: str
    target: TargetSpec
    instances: int
    witness: Witness | None = None
    stats: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if self.polychromatic == (self.witness is not None):
            raise ValueError("a witness is required exactly when the verdict is negative")

    def __bool__(self) -> bool:
        return self.polychromatic

    def to_text(self) -> str:
        lines = [
            f"verdict: {'polychromatic' if self.polychromatic else 'not-polychromatic'}",
            f"mode: {self.mode}",
            f"target: {self.target}",
            f"palette: {self.palette_size}",
            f"instances: {self.instances}",
        ]
        lines += [f"{k}: {v}" for k, v in sorted(self.stats.items())]
        w = self.witness
        if w is not None:
            if w.gaps is not None:
                lines.append(f"witness-gaps: {','.join(map(str, w.gaps))}")
            lines.append(f"witness-embedding: {w.pattern}")
            lines.append(f"witness-puncture: {w.puncture}")
            lines.append(f"witness-colors: {','.join(map(str, sorted(w.colors))) or 'none'}")
            missing = sorted(set(range(self.palette_size)) - w.colors)
            lines.append(f"witness-missing: {','.join(map(str, missing))}")
        return "\n".join(lines) + "\n"


def _mask_colors(mask: int) -> frozenset[int]:
    return frozenset(k for k in range(mask.bit_length()) if mask >> k & 1)


# -- residue route --------------------------------------------------------------

class _ResidueModel:
    """Shape structure of a target with cached per-shape color masks.

    Prefix sums P[k] = a_0 + ... + a_{k-1} (P[0] = 0) fix every origin:
    coordinate j of a shape is P[hi_j + 1] - P[lo_j] over its gap span.
    """

    def __init__(self, target: TargetSpec, coloring: ModularFormulaColoring):
        if coloring.arity != target.i + 1:
            raise ValueError(f"coloring arity {coloring.arity} does not match i={target.i}")
        self.target = target
        self.coloring = coloring
        self.periods = period_of(coloring)
        self.modulus = lcm(*self.periods)
        d, i = target.d, target.i
        base = shape_sequence((0,) * (d + 1), i)
        self.deletions = target.deletions()
        self.labels = [s.label for s in base.shapes]
        # per deletion, per shape: surviving offsets (origin is zero in ``base``)
        self.offsets = [
            [np.asarray(s.offsets(), dtype=np.int64).reshape(-1, i + 1) for s in apply_puncture(base, D).shapes]
            for D in self.deletions
        ]
        # deletions removing the same cells behave identically; search one of each
        first: dict[tuple, int] = {}
        self.canon = [
            first.setdefault(tuple(tuple(map(tuple, o.tolist())) for o in offs), D)
            for D, offs in enumerate(self.offsets)
        ]
        self.distinct = sorted(first.values())
        self.spans = []
        for s in base.shapes:
            bounds = [-1, *s.star_set, d]
            self.spans.append([(bounds[j] + 1, bounds[j + 1] + 1) for j in range(i + 1)])
        self.full = (1 << coloring.modulus) - 1
        self._cache: dict[tuple, int] = {}
        self.lookups = 0

    def origin(self, shape: int, prefix: Sequence[int]) -> tuple[int, ...]:
        return tuple(prefix[hi] - prefix[lo] for lo, hi in self.spans[shape])

    def mask(self, shape: int, deletion: int, origin: Sequence[int]) -> int:
        deletion = self.canon[deletion]
        key = (shape, deletion, tuple(o % p for o, p in zip(origin, self.periods)))
        m = self._cache.get(key)
        if m is None:
            offs = self.offsets[deletion][shape]
            m = 0
            if len(offs):
                cells = offs + np.asarray(key[2], dtype=np.int64)
                for col in set(evaluate_many(self.coloring, cells).tolist()):
                    m |= 1 << col
            self._cache[key] = m
        self.lookups += 1
        return m

    def colors_at(self, gaps: Sequence[int], deletion: int) -> list[int]:
        prefix = [0]
        for g in gaps:
            prefix.append(prefix[-1] + g)
        return [self.mask(s, deletion, self.origin(s, prefix)) for s in range(len(self.spans))]


class _PrefixSearch:
    """Is there a prefix-sum vector (mod M) where some color misses every shape?

    Variables are P[1..d+1].  ``fixed`` pins some of them; with the WLOG
    reduction P[1] = 0 and P[d+1] is tied to P[d].  Each shape constrains the
    prefix indices its origin reads.  Depth-first search keeps the set of
    colors still missing from every decided shape and prunes with forward
    checking on shapes that have a single open variable.
    """

    def __init__(self, model: _ResidueModel, wlog: bool):
        self.model = model
        d = model.target.d
        self.wlog = wlog
        self.alias = {d + 1: d} if wlog and d >= 1 else {}
        self.deps = []
        for spans in model.spans:
            idx = {self._var(k) for lo, hi in spans for k in (lo, hi)}
            idx.discard(0)
            self.deps.append(idx)
        self.nodes = 0

    def _var(self, k: int) -> int:
        return self.alias.get(k, k)

    def _prefix(self, assign: Mapping[int, int]) -> list[int]:
        d = self.model.target.d
        return [0] + [assign.get(self._var(k), 0) for k in range(1, d + 2)]

    def violation(self, deletion: int, fixed: Mapping[int, int]) -> int:
        """A color missing everywhere for some completion of ``fixed``, else -1."""
        d = self.model.target.d
        free = {self._var(k) for k in range(1, d + 2)}
        if self.wlog:
            fixed = {**fixed, 1: 0}
        assign = {k: v % self.model.modulus for k, v in fixed.items() if k in free}
        open_vars = sorted(
            free - set(assign), key=lambda v: (-sum(v in dep for dep in self.deps), v)
        )
        return self._dfs(deletion, assign, open_vars, self.model.full)

    def _dfs(self, deletion: int, assign: dict[int, int], open_vars: list[int], cand: int) -> int:
        self.nodes += 1
        model = self.model
        M = model.modulus
        prefix = self._prefix(assign)
        for s, dep in enumerate(self.deps):
            unset = [v for v in dep if v not in assign]
            if not unset:
                cand &= ~model.mask(s, deletion, model.origin(s, prefix))
            elif len(unset) == 1:
                v = unset[0]
                reach = 0
                for x in range(M):
                    prefix_x = prefix.copy()
                    for k in range(1, len(prefix)):
                        if self._var(k) == v:
                            prefix_x[k] = x
                    reach |= ~model.mask(s, deletion, model.origin(s, prefix_x))
                    if reach & cand == cand:
                        break
                cand &= reach
            if not cand & model.full:
                return -1
        if not open_vars:
            cand &= model.full
            return (cand & -cand).bit_length() - 1
        v, rest = open_vars[0], open_vars[1:]
        for x in range(M):
            assign[v] = x
            found = self._dfs(deletion, assign, rest, cand)
            if found >= 0:
                del assign[v]
                return found
        del assign[v]
        return -1


def _gap_ranges(model: _ResidueModel, wlog: bool) -> list[range]:
    d, M = model.target.d, model.modulus
    return [range(1) if wlog and k in (0, d) else range(M) for k in range(d + 1)]


def _residue_verdict(model, wlog, witness_gaps, method, nodes) -> Verdict:
    target = model.target
    classes = 1
    for r in _gap_ranges(model, wlog):
        classes *= len(r)
    stats = {"method": method, "residue-modulus": model.modulus, "wlog": wlog, "nodes": nodes}
    if witness_gaps is None:
        return Verdict(True, model.coloring.modulus, "residue", target,
                       classes * len(model.deletions), None, stats)
    masks = None
    for D in range(len(model.deletions)):
        masks = model.colors_at(witness_gaps, D)
        present = 0
        for m in masks:
            present |= m
        if present != model.full:
            break
    w = Witness(model.deletions[D], _mask_colors(present), gaps=tuple(witness_gaps))
    return Verdict(False, model.coloring.modulus, "residue", target,
                   classes * len(model.deletions), w, stats)


def verify_residues(
    target: TargetSpec,
    coloring: Coloring,
    wlog: bool = False,
    method: str = "search",
) -> Verdict:
    """Check every gap-vector residue class of ``target`` under a periodic coloring.

    With ``wlog`` the outer gaps are pinned to zero, which is only allowed when
    shifting x_1 or x_{i+1} shifts all colors uniformly.
    """
    if isinstance(coloring, TableColoring):
        raise ValueError("residue verification needs a periodic (formula) coloring")
    if wlog and not uniform_shift_holds(coloring):
        raise ValueError("the WLOG reduction needs a coloring without offsets on x_1 or x_{i+1}")
    model = _ResidueModel(target, coloring)
    if method == "enumerate":
        return _enumerate_residues(model, wlog)
    if method != "search":
        raise ValueError(f"unknown method {method!r}")
    search = _PrefixSearch(model, wlog)
    if all(search.violation(D, {}) < 0 for D in model.distinct):
        return _residue_verdict(model, wlog, None, method, search.nodes)
    # A failure exists; fix gaps one at a time, smallest value that still admits one.
    gaps: list[int] = []
    ranges = _gap_ranges(model, wlog)
    for k in range(model.target.d + 1):
        for a in ranges[k]:
            trial = gaps + [a]
            fixed = {}
            total = 0
            for idx, g in enumerate(trial):
                total += g
                fixed[idx + 1] = total
            if any(search.violation(D, fixed) >= 0 for D in model.distinct):
                gaps = trial
                break
        else:  # pragma: no cover - the search is exact, so some value must work
            raise RuntimeError("residue search lost its witness")
    return _residue_verdict(model, wlog, gaps, method, search.nodes)


def _enumerate_residues(model: _ResidueModel, wlog: bool) -> Verdict:
    nodes = 0
    for gaps in product(*_gap_ranges(model, wlog)):
        for D in model.distinct:
            nodes += 1
            present = 0
            for m in model.colors_at(gaps, D):
                present |= m
            if present != model.full:
                return _residue_verdict(model, wlog, gaps, "enumerate", nodes)
    return _residue_verdict(model, wlog, None, "enumerate", nodes)


# -- color tables ----------------------------------------------------------------

@dataclass(frozen=True)
class ColorTable:
    """Per residue row (and deletion), the color set of every shape."""

    target: TargetSpec
    shape_labels: tuple[str, ...]
    rows: tuple[tuple[tuple[int, ...], tuple[int, ...], PunctureSpec, tuple[frozenset[int], ...]], ...]

    def row_for(self, key: Sequence[int], puncture: PunctureSpec | None = None) -> dict[str, frozenset[int]]:
        for k, _, D, sets in self.rows:
            if k == tuple(key) and (puncture is None or D == puncture):
                return dict(zip(self.shape_labels, sets))
        raise KeyError(tuple(key))

    def to_csv(self) -> str:
        d = self.target.d
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"a{k + 1}" for k in range(d + 1)] + ["representative", "puncture", *self.shape_labels])
        for key, gaps, D, sets in self.rows:
            w.writerow([*key, ",".join(map(str, gaps)), str(D), *(",".join(map(str, sorted(s))) for s in sets)])
        return buf.getvalue()


def parse_color_table(text: str, target: TargetSpec) -> ColorTable:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    d = target.d
    labels = tuple(header[d + 3 :])
    rows = []
    for rec in reader:
        key = tuple(int(x) for x in rec[: d + 1])
        gaps = tuple(int(x) for x in rec[d + 1].split(","))
        D = PunctureSpec.parse(rec[d + 2])
        sets = tuple(frozenset(int(x) for x in s.split(",")) if s else frozenset() for s in rec[d + 3 :])
        rows.append((key, gaps, D, sets))
    return ColorTable(target, labels, tuple(rows))


def residue_rows(d: int, interior_modulus: int, total_modulus: int | None = None) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Residue keys for the interior gaps and a representative gap vector for each.

    Keys run over (0, r_2, ..., r_d, 0) with r_j in [0, interior_modulus) in
    lexicographic order.  When ``total_modulus`` is given, the representative
    lifts a_d by multiples of ``interior_modulus`` until the total is 0 modulo
    ``total_modulus``.
    """
    rows = []
    for inner in product(range(interior_modulus), repeat=max(d - 1, 0)):
        key = (0, *inner, 0) if d >= 1 else (0,)
        gaps = list(key)
        if total_modulus is not None and d >= 2:
            for _ in range(total_modulus):
                if sum(gaps) % total_modulus == 0:
                    break
                gaps[d - 1] += interior_modulus
            else:
                raise ValueError("no representative with total 0 for these moduli")
        rows.append((key, tuple(gaps)))
    return rows


def default_residue_rows(target: TargetSpec, coloring: ModularFormulaColoring) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Residue system matching the hand proofs for offset colorings, else the full period.

    For a coloring whose offset term reads an interior coordinate with period t
    and whose coefficients are all equal, interior gaps only matter mod t and the
    total can be normalized to 0 mod m; otherwise every residue is listed.
    """
    if (
        coloring.offset_coord is not None
        and uniform_shift_holds(coloring)
        and len(set(coloring.coeffs[: target.i + 1])) == 1
        and target.i == coloring.arity - 1
    ):
        return residue_rows(target.d, coloring.offset_period, coloring.modulus)
    M = lcm(*period_of(coloring))
    wlog = uniform_shift_holds(coloring)
    ranges = [range(1) if wlog and k in (0, target.d) else range(M) for k in range(target.d + 1)]
    return [(g, g) for g in product(*ranges)]


def sequence_color_table(
    target: TargetSpec,
    coloring: Coloring,
    residues: Sequence[tuple[Sequence[int], Sequence[int]]] | Sequence[Sequence[int]] | None = None,
) -> ColorTable:
    """Color set of each shape for each residue row.

    ``residues`` holds (key, representative gaps) pairs or plain gap vectors.
    """
    if isinstance(coloring, TableColoring):
        raise ValueError("color tables need a periodic (formula) coloring")
    model = _ResidueModel(target, coloring)
    if residues is None:
        residues = default_residue_rows(target, coloring)
    rows = []
    for item in residues:
        if len(item) == 2 and not isinstance(item[0], int):
            key, gaps = item
        else:
            key = gaps = item
        key, gaps = tuple(key), tuple(gaps)
        if len(gaps) != target.d + 1:
            raise ValueError(f"gap vector {gaps} does not fit d={target.d}")
        for D, spec in enumerate(model.deletions):
            sets = tuple(_mask_colors(m) for m in model.colors_at(gaps, D))
            rows.append((key, gaps, spec, sets))
    return ColorTable(target, tuple(model.labels), tuple(rows))


# -- concrete route --------------------------------------------------------------

RawAssignment = Union[Mapping[str, int], Sequence[int], np.ndarray]


class _LocalStructure:
    """The i-subcubes of an abstract Q_d and which of them each deletion destroys."""

    def __init__(self, d: int, i: int, kind: str):
        host = StarPattern("*" * d)
        subs = list(sub_subcubes(host, i))
        index = {p: k for k, p in enumerate(subs)}
        self.kept = np.array([p.star_positions for p in subs], dtype=np.int64).reshape(len(subs), i)
        self.fixed_pos = np.array(
            [[k for k in range(d) if p.word[k] != "*"] for p in subs], dtype=np.int64
        ).reshape(len(subs), d - i)
        self.fixed_bits = np.array(
            [[int(ch) for ch in p.word if ch != "*"] for p in subs], dtype=np.int8
        ).reshape(len(subs), d - i)
        self.deletions = puncture_choices(d, kind)
        removed = []
        for D in self.deletions:
            alive = set(sub_subcubes(host, i, D))
            removed.append([index[p] for p in subs if p not in alive])
        width = max(len(r) for r in removed)
        self.removed = np.array(removed, dtype=np.int64).reshape(len(removed), width)


def _embedding_blocks(n: int, d: int, rows: int) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
    """Batches of embeddings in enumerate_subcubes order: (first index, stars, words)."""
    free = n - d
    bits = ((np.arange(2**free)[:, None] >> np.arange(free - 1, -1, -1)) & 1).astype(np.int8)
    stars_acc, words_acc, start, count = [], [], 0, 0
    for stars in combinations(range(n), d):
        fixed = [k for k in range(n) if k not in stars]
        words = np.zeros((2**free, n), dtype=np.int8)
        words[:, fixed] = bits
        stars_acc.append(np.broadcast_to(np.array(stars, dtype=np.int64), (2**free, d)))
        words_acc.append(words)
        count += 2**free
        if count >= rows:
            yield start, np.concatenate(stars_acc), np.concatenate(words_acc)
            start += count
            stars_acc, words_acc, count = [], [], 0
    if count:
        yield start, np.concatenate(stars_acc), np.concatenate(words_acc)


def _subcube_keys(n: int, stars: np.ndarray, words: np.ndarray) -> np.ndarray:
    """Integer key (star mask << n | one bits) of concrete subcubes."""
    weights = np.int64(1) << np.arange(n - 1, -1, -1, dtype=np.int64)
    star_mask = (np.int64(1) << (n - 1 - stars)).sum(axis=-1)
    return (star_mask << n) | (words.astype(np.int64) @ weights)


def _assignment_table(n: int, i: int, raw: RawAssignment) -> tuple[np.ndarray, np.ndarray]:
    patterns = list(enumerate_subcubes(n, i))
    if isinstance(raw, Mapping):
        lookup = {StarPattern.parse(str(k)): int(v) for k, v in raw.items()}
        try:
            colors = np.array([lookup[p] for p in patterns], dtype=np.int64)
        except KeyError as exc:
            raise ValueError(f"raw assignment does not color {exc.args[0]}") from None
    else:
        colors = np.asarray(raw, dtype=np.int64)
        if colors.shape != (len(patterns),):
            raise ValueError(f"raw assignment needs {len(patterns)} colors, got {colors.shape}")
    stars = np.array([p.star_positions for p in patterns], dtype=np.int64).reshape(len(patterns), i)
    words = np.array([[1 if ch == "1" else 0 for ch in p.word] for p in patterns], dtype=np.int8)
    keys = _subcube_keys(n, stars, words)
    order = np.argsort(keys)
    return keys[order], colors[order]


def _check_range(args) -> tuple[int, int, int] | None:
    """First failing (embedding, deletion) among embeddings [lo, hi), plus count."""
    n, target, coloring, raw_table, palette, lo, hi, rows = args
    d, i = target.d, target.i
    local = _LocalStructure(d, i, target.puncture)
    L = len(local.kept)
    for start, stars, words in _embedding_blocks(n, d, rows):
        end = start + len(words)
        if end <= lo or start >= hi:
            continue
        sel = slice(max(lo - start, 0), min(hi, end) - start)
        stars, words, base = stars[sel], words[sel], max(lo, start)
        E = len(words)
        # concrete words of every local subcube of every embedding: (E, L, n)
        sub_words = np.repeat(words[:, None, :], L, axis=1)
        if d > i:
            pos = stars[:, local.fixed_pos]  # (E, L, d-i)
            np.put_along_axis(sub_words, pos, np.broadcast_to(local.fixed_bits, pos.shape), axis=2)
        sub_stars = stars[:, local.kept]  # (E, L, i)
        if raw_table is None:
            cum = np.concatenate(
                [np.zeros((E, L, 1), dtype=np.int64), np.cumsum(sub_words, axis=2, dtype=np.int64)], axis=2
            )
            starts = np.concatenate([np.zeros((E, L, 1), dtype=np.int64), sub_stars], axis=2)
            ends = np.concatenate([sub_stars, np.full((E, L, 1), n, dtype=np.int64)], axis=2)
            gaps = np.take_along_axis(cum, ends, axis=2) - np.take_along_axis(cum, starts, axis=2)
            colors = evaluate_many(coloring, gaps.reshape(E * L, i + 1)).reshape(E, L)
        else:
            keys_sorted, colors_sorted = raw_table
            keys = _subcube_keys(n, sub_stars, sub_words)
            colors = colors_sorted[np.searchsorted(keys_sorted, keys)]
        if colors.size and (colors.min() < 0 or colors.max() >= palette):
            raise ValueError("coloring uses colors outside its palette")
        onehot = colors[:, :, None] == np.arange(palette)
        totals = onehot.sum(axis=1)  # (E, palette)
        fail = np.zeros((E, len(local.deletions)), dtype=bool)
        for D, idx in enumerate(local.removed):
            left = totals - onehot[:, idx, :].sum(axis=1) if idx.size else totals
            fail[:, D] = ~(left > 0).all(axis=1)
        if fail.any():
            e = int(np.argmax(fail.any(axis=1)))
            return base + e, int(np.argmax(fail[e])), hi - lo
    return None


def verify_concrete(
    n: int,
    target: TargetSpec,
    coloring: Coloring | RawAssignment,
    palette: int | None = None,
    workers: int = 1,
    block_rows: int = 4096,
) -> Verdict:
    """Brute force over every embedding of Q_d in Q_n and every deletion.

    ``coloring`` is a simple coloring (arity i+1) or a raw assignment: a mapping
    from pattern text to color, or a sequence of colors aligned with
    ``enumerate_subcubes(n, i)``.  ``palette`` defaults to the coloring's
    palette, or to 1 + the largest color of a raw assignment.
    """
    if n < target.d:
        raise ValueError(f"Q_{target.d} does not embed in Q_{n}")
    d, i = target.d, target.i
    raw_table = None
    if isinstance(coloring, (ModularFormulaColoring, TableColoring)):
        if coloring.arity != i + 1:
            raise ValueError(f"coloring arity {coloring.arity} does not match i={i}")
        palette = coloring.palette_size if palette is None else palette
    else:
        raw_table = _assignment_table(n, i, coloring)
        if palette is None:
            palette = int(raw_table[1].max()) + 1 if raw_table[1].size else 0
        coloring = None
    if palette < 1:
        raise ValueError("palette size must be positive")
    n_emb = comb(n, d) * 2 ** (n - d)
    local = _LocalStructure(d, i, target.puncture)
    rows = max(1, block_rows // max(1, len(local.kept)))
    if workers > 1:
        step = -(-n_emb // workers)
        jobs = [(n, target, coloring, raw_table, palette, lo, min(lo + step, n_emb), rows)
                for lo in range(0, n_emb, step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            found = [r for r in pool.map(_check_range, jobs) if r is not None]
        first = min(found)[:2] if found else None
    else:
        r = _check_range((n, target, coloring, raw_table, palette, 0, n_emb, rows))
        first = r[:2] if r else None
    stats = {"n": n, "embeddings": n_emb}
    instances = n_emb * len(local.deletions)
    if first is None:
        return Verdict(True, palette, "concrete", target, instances, None, stats)
    e, D = first
    emb = _nth_subcube(n, d, e)
    spec = local.deletions[D]
    present = set()
    for q in sub_subcubes(emb, i, spec):
        if raw_table is None:
            present.add(evaluate_color(coloring, q))
        else:
            present.add(_raw_color(n, raw_table, q))
    return Verdict(False, palette, "concrete", target, instances,
                   Witness(spec, frozenset(present), embedding=emb), stats)


def evaluate_color(coloring: Coloring, q: StarPattern) -> int:
    return coloring(q.gap_vector())


def _raw_color(n: int, raw_table, q: StarPattern) -> int:
    keys_sorted, colors_sorted = raw_table
    stars = np.array([q.star_positions], dtype=np.int64)
    words = np.array([[1 if ch == "1" else 0 for ch in q.word]], dtype=np.int8)
    key = _subcube_keys(n, stars, words)
    return int(colors_sorted[np.searchsorted(keys_sorted, key)][0])


def _nth_subcube(n: int, d: int, index: int) -> StarPattern:
    per = 2 ** (n - d)
    combo_idx, row = divmod(index, per)
    for k, stars in enumerate(combinations(range(n), d)):
        if k == combo_idx:
            fixed = [p for p in range(n) if p not in stars]
            word = ["*"] * n
            for j, p in enumerate(fixed):
                word[p] = str(row >> (len(fixed) - 1 - j) & 1)
            return StarPattern("".join(word))
    raise IndexError(index)
