"""Vertices, edges and subcube embeddings of Q_n as star-patterns.

A star-pattern is a word over ``0``, ``1`` and ``*``; the stars are the free
coordinates of the subcube.  Vertices are patterns without stars and edges are
patterns with exactly one star.  Text form is the word in square brackets,
e.g. ``[010*]``.

Enumeration order is part of the contract (search logs and failure witnesses
depend on it): star-position sets in lexicographic order, then the fixed bits
in binary counting order with the leftmost fixed position most significant.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Sequence

STAR = "*"
_SYMBOLS = frozenset("01*")


@dataclass(frozen=True, order=True)
class StarPattern:
    """An embedding of a subcube in Q_n (``dim`` = number of stars)."""

    word: str

    def __post_init__(self) -> None:
        if not self.word:
            raise ValueError("a star-pattern needs at least one position")
        bad = set(self.word) - _SYMBOLS
        if bad:
            raise ValueError(f"invalid symbols {sorted(bad)!r} in pattern {self.word!r}")

    @classmethod
    def parse(cls, text: str) -> "StarPattern":
        text = text.strip()
        if text.startswith("[") and text.endswith("]"):
            text = text[1:-1]
        return cls(text)

    def __str__(self) -> str:
        return f"[{self.word}]"

    @property
    def n(self) -> int:
        return len(self.word)

    @property
    def dim(self) -> int:
        return self.word.count(STAR)

    @property
    def ones(self) -> int:
        return self.word.count("1")

    @property
    def star_positions(self) -> tuple[int, ...]:
        return tuple(k for k, ch in enumerate(self.word) if ch == STAR)

    def gap_vector(self) -> tuple[int, ...]:
        return gap_vector_of(self)


def gap_vector_of(p: StarPattern) -> tuple[int, ...]:
    """Counts of 1s in the ``dim + 1`` gaps delimited by the stars of ``p``.

    For an edge this is ``(l(e), r(e))``; for a vertex it is the single total.
    """
    gaps = [0]
    for ch in p.word:
        if ch == STAR:
            gaps.append(0)
        elif ch == "1":
            gaps[-1] += 1
    return tuple(gaps)


def pattern_from_gaps(gaps: Sequence[int]) -> StarPattern:
    """Shortest pattern realizing ``gaps``: runs of 1s separated by stars."""
    if not gaps or any(g < 0 for g in gaps):
        raise ValueError(f"invalid gap vector {tuple(gaps)!r}")
    return StarPattern(STAR.join("1" * g for g in gaps))


def enumerate_subcubes(n: int, i: int) -> Iterator[StarPattern]:
    """Every i-dimensional subcube of Q_n exactly once, in the documented order."""
    if not 0 <= i <= n:
        raise ValueError(f"need 0 <= i <= n, got n={n}, i={i}")
    for stars in combinations(range(n), i):
        fixed = [k for k in range(n) if k not in stars]
        for bits in product("01", repeat=n - i):
            word = [STAR] * n
            for k, b in zip(fixed, bits):
                word[k] = b
            yield StarPattern("".join(word))


@dataclass(frozen=True)
class PunctureSpec:
    """Which vertex or edge is removed from an embedded Q_d.

    ``pattern`` is local to the embedding: a d-bit word for a vertex, a d-symbol
    word with one star for an edge.
    """

    kind: str = "none"
    pattern: StarPattern | None = None

    def __post_init__(self) -> None:
        if self.kind == "none":
            if self.pattern is not None:
                raise ValueError("puncture kind 'none' takes no pattern")
        elif self.kind == "vertex":
            if self.pattern is None or self.pattern.dim != 0:
                raise ValueError("a deleted vertex is a word without stars")
        elif self.kind == "edge":
            if self.pattern is None or self.pattern.dim != 1:
                raise ValueError("a deleted edge is a word with exactly one star")
        else:
            raise ValueError(f"unknown puncture kind {self.kind!r}")

    @classmethod
    def vertex(cls, word: str) -> "PunctureSpec":
        return cls("vertex", StarPattern.parse(word))

    @classmethod
    def edge(cls, word: str) -> "PunctureSpec":
        return cls("edge", StarPattern.parse(word))

    @classmethod
    def parse(cls, text: str) -> "PunctureSpec":
        """Parse ``none``, ``vertex:[0110]`` or ``edge:[01*0]``."""
        text = text.strip()
        if text == "none":
            return NO_PUNCTURE
        kind, sep, word = text.partition(":")
        if not sep:
            raise ValueError(f"malformed puncture {text!r}")
        return cls(kind, StarPattern.parse(word))

    def __str__(self) -> str:
        return "none" if self.pattern is None else f"{self.kind}:{self.pattern}"

    @property
    def length(self) -> int | None:
        return None if self.pattern is None else self.pattern.n


NO_PUNCTURE = PunctureSpec()

PUNCTURE_KINDS = ("none", "vertex", "edge")


def puncture_choices(d: int, kind: str) -> list[PunctureSpec]:
    """All deletions of the given kind from Q_d, in enumeration order."""
    if kind == "none":
        return [NO_PUNCTURE]
    if kind == "vertex":
        return [PunctureSpec("vertex", p) for p in enumerate_subcubes(d, 0)]
    if kind == "edge":
        if d < 1:
            raise ValueError("edge deletion needs d >= 1")
        return [PunctureSpec("edge", p) for p in enumerate_subcubes(d, 1)]
    raise ValueError(f"unknown puncture kind {kind!r}")


def check_puncture(puncture: PunctureSpec, d: int) -> None:
    if puncture.length is not None and puncture.length != d:
        raise ValueError(
            f"puncture {puncture} has length {puncture.length}, embedding has dimension {d}"
        )


def removes(puncture: PunctureSpec, kept: Sequence[int], bits: dict[int, str]) -> bool:
    """Whether the local subcube (kept stars, bits on the other stars) is destroyed.

    A vertex deletion destroys every subcube containing the vertex; an edge
    deletion destroys every subcube containing both endpoints of the edge.
    """
    if puncture.pattern is None:
        return False
    w = puncture.pattern.word
    if puncture.kind == "edge" and w.index(STAR) not in kept:
        return False
    return all(w[k] == b for k, b in bits.items())


def sub_subcubes(
    host: StarPattern, i: int, puncture: PunctureSpec = NO_PUNCTURE
) -> Iterator[StarPattern]:
    """The i-subcubes of the embedded ``host`` that survive ``puncture``.

    Order: kept-star subsets lexicographically (by host star index), then the
    bits on the remaining host stars in binary counting order.
    """
    stars = host.star_positions
    d = len(stars)
    if not 0 <= i <= d:
        raise ValueError(f"need 0 <= i <= host.dim, got i={i}, dim={d}")
    check_puncture(puncture, d)
    base = list(host.word)
    for kept in combinations(range(d), i):
        others = [k for k in range(d) if k not in kept]
        for bits in product("01", repeat=d - i):
            assigned = dict(zip(others, bits))
            if removes(puncture, kept, assigned):
                continue
            word = base.copy()
            for k, b in assigned.items():
                word[stars[k]] = b
            yield StarPattern("".join(word))
