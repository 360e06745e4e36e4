"""Set partitions of two-row diagrams and the calculus between them.

A diagram has ``upper`` points on the top row and the remaining points on
the bottom row.  Points are numbered in reading order (top row left to
right, then bottom row left to right) and a partition is stored as the
restricted growth string of its block labels in that order.  Each point
carries a color, white (0) or black (1).

Geometric notions that depend on the cyclic position of the legs
(crossings, signatures, flattening) use the clockwise order instead: top
row left to right, then bottom row right to left.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

WHITE = 0
BLACK = 1

ColoredWord = tuple[int, ...]
MultiIndex = tuple[int, ...]

_POINT_CHARS = "123456789abcdefghijklmnopqrstuvwxyz"
_BLOCK_CHARS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
_COLOR_IN = {"o": WHITE, "∘": WHITE, "x": BLACK, "*": BLACK, "•": BLACK}
_COLOR_OUT = {WHITE: "o", BLACK: "x"}
EMPTY_TEXT = "∅"


def parse_word(text: str) -> ColoredWord:
    """Parse a color word such as ``"oxxo"`` (``o`` white, ``x`` black)."""
    try:
        return tuple(_COLOR_IN[ch] for ch in text)
    except KeyError as exc:
        raise ValueError(f"bad color symbol {exc.args[0]!r} in word {text!r}") from None


def format_word(word: Sequence[int]) -> str:
    return "".join(_COLOR_OUT[c] for c in word)


def white_word(length: int) -> ColoredWord:
    return (WHITE,) * length


def _canonical_labels(values: Iterable) -> tuple[int, ...]:
    seen: dict = {}
    out = []
    for v in values:
        if v not in seen:
            seen[v] = len(seen)
        out.append(seen[v])
    return tuple(out)


@dataclass(frozen=True)
class Partition:
    """A partition of ``upper`` top points and ``size - upper`` bottom points."""

    labels: tuple[int, ...]
    upper: int = 0
    colors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        if _canonical_labels(labels) != labels:
            raise ValueError(f"labels {labels} are not a restricted growth string")
        if not 0 <= self.upper <= len(labels):
            raise ValueError("upper point count out of range")
        colors = tuple(self.colors) if self.colors else white_word(len(labels))
        if len(colors) != len(labels) or any(c not in (WHITE, BLACK) for c in colors):
            raise ValueError("colors must give one color per point")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "colors", colors)

    @classmethod
    def from_labels(cls, values: Iterable, upper: int = 0,
                    colors: Sequence[int] = ()) -> "Partition":
        """Build from arbitrary hashable block labels, one per point."""
        return cls(_canonical_labels(values), upper, tuple(colors))

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], upper: int = 0,
                    colors: Sequence[int] = ()) -> "Partition":
        """Build from blocks of 1-based points in reading order."""
        blocks = [list(b) for b in blocks]
        points = sorted(p for b in blocks for p in b)
        if points != list(range(1, len(points) + 1)):
            raise ValueError("blocks must cover 1..n exactly once")
        owner = {}
        for b, block in enumerate(blocks):
            if not block:
                raise ValueError("empty block")
            for p in block:
                owner[p] = b
        return cls.from_labels((owner[p] for p in points), upper, colors)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def lower(self) -> int:
        return len(self.labels) - self.upper

    @property
    def n_blocks(self) -> int:
        return max(self.labels) + 1 if self.labels else 0

    def __len__(self) -> int:
        return self.n_blocks

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        """Blocks as tuples of 0-based points, ordered by smallest point."""
        out: list[list[int]] = [[] for _ in range(self.n_blocks)]
        for p, b in enumerate(self.labels):
            out[b].append(p)
        return tuple(tuple(b) for b in out)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        sizes = [0] * self.n_blocks
        for b in self.labels:
            sizes[b] += 1
        return tuple(sizes)

    @property
    def upper_word(self) -> ColoredWord:
        return self.colors[:self.upper]

    @property
    def lower_word(self) -> ColoredWord:
        return self.colors[self.upper:]

    @property
    def is_pairing(self) -> bool:
        return all(s == 2 for s in self.block_sizes)

    @property
    def is_even(self) -> bool:
        return all(s % 2 == 0 for s in self.block_sizes)

    def with_colors(self, colors: Sequence[int]) -> "Partition":
        return Partition(self.labels, self.upper, tuple(colors))

    def sort_key(self) -> tuple:
        return (self.size, self.upper, self.labels, self.colors)

    def clockwise(self) -> list[int]:
        """Points in clockwise order starting from the top left."""
        return list(range(self.upper)) + list(range(self.size - 1, self.upper - 1, -1))

    def __str__(self) -> str:
        return format_partition(self)


def format_partition(p: Partition) -> str:
    """Text form: ``12|34`` for one row, ``ab/ba`` for two rows, ``@colors`` if any black."""
    if p.size == 0:
        return EMPTY_TEXT
    if p.upper == 0:
        if p.size > len(_POINT_CHARS):
            raise ValueError("too many points for the text syntax")
        text = "|".join("".join(_POINT_CHARS[q] for q in block) for block in p.blocks)
    else:
        if p.n_blocks > len(_BLOCK_CHARS):
            raise ValueError("too many blocks for the text syntax")
        word = "".join(_BLOCK_CHARS[b] for b in p.labels)
        text = word[:p.upper] + "/" + word[p.upper:]
    if any(p.colors):
        if p.upper == 0:
            text += "@" + format_word(p.colors)
        else:
            text += "@" + format_word(p.upper_word) + ":" + format_word(p.lower_word)
    return text


def parse_partition(text: str) -> Partition:
    text = text.strip()
    structure, _, color_text = text.partition("@")
    if structure in (EMPTY_TEXT, "", "-"):
        p = Partition(())
    elif "/" in structure:
        top, bottom = structure.split("/", 1)
        if "/" in bottom:
            raise ValueError(f"malformed partition {text!r}")
        p = Partition.from_labels(top + bottom, upper=len(top))
    else:
        blocks = []
        for chunk in structure.split("|"):
            if not chunk:
                raise ValueError(f"empty block in {text!r}")
            try:
                blocks.append([_POINT_CHARS.index(ch) + 1 for ch in chunk])
            except ValueError:
                raise ValueError(f"bad point label in {text!r}") from None
        p = Partition.from_blocks(blocks)
    if color_text:
        if ":" in color_text:
            top, bottom = color_text.split(":", 1)
            if len(top) != p.upper:
                raise ValueError("upper color word length mismatch")
            colors = parse_word(top) + parse_word(bottom)
        else:
            colors = parse_word(color_text)
        if len(colors) != p.size:
            raise ValueError("color word length mismatch")
        p = p.with_colors(colors)
    return p


# ---------------------------------------------------------------- enumeration

def _set_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """All restricted growth strings of length n, lexicographically."""
    if n == 0:
        yield ()
        return
    labels = [0] * n

    def rec(pos: int, top: int) -> Iterator[tuple[int, ...]]:
        if pos == n:
            yield tuple(labels)
            return
        for b in range(top + 2):
            labels[pos] = b
            yield from rec(pos + 1, max(top, b))

    yield from rec(1, 0)


def _block_lists(points: tuple[int, ...], size_ok: Callable[[int], bool],
                 noncrossing: bool) -> Iterator[list[tuple[int, ...]]]:
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for r in range(len(rest) + 1):
        if not size_ok(r + 1):
            continue
        for chosen in combinations(range(len(rest)), r):
            block = (first,) + tuple(rest[c] for c in chosen)
            if noncrossing:
                cuts = (-1,) + chosen + (len(rest),)
                segments = [rest[cuts[a] + 1:cuts[a + 1]] for a in range(len(cuts) - 1)]
                for parts in product(*(list(_block_lists(s, size_ok, True)) for s in segments)):
                    yield [block] + [b for part in parts for b in part]
            else:
                left = tuple(q for c, q in enumerate(rest) if c not in chosen)
                for tail in _block_lists(left, size_ok, False):
                    yield [block] + tail


_SIZE_RULES: dict[str, Callable[[int], bool]] = {
    "all": lambda s: True,
    "pairings": lambda s: s == 2,
    "even": lambda s: s % 2 == 0,
    "singletons-pairings": lambda s: s <= 2,
}

FILTERS = ("all", "pairings", "noncrossing", "noncrossing-pairings", "even",
           "noncrossing-even", "singletons-pairings", "noncrossing-singletons-pairings")


@lru_cache(maxsize=None)
def _enumerate_labels(k: int, filter: str) -> tuple[tuple[int, ...], ...]:
    if filter not in FILTERS:
        raise ValueError(f"unknown filter {filter!r}")
    noncrossing = filter.startswith("noncrossing")
    rule = filter.removeprefix("noncrossing").lstrip("-") or "all"
    if filter == "all":
        return tuple(_set_partitions(k))
    owner = [0] * k
    found = set()
    for blocks in _block_lists(tuple(range(k)), _SIZE_RULES[rule], noncrossing):
        for b, block in enumerate(blocks):
            for q in block:
                owner[q] = b
        found.add(_canonical_labels(owner))
    return tuple(sorted(found))


def enumerate_partitions(k: int, filter: str = "all",
                         colors: Sequence[int] = ()) -> list[Partition]:
    """All one-row partitions of k points of the given kind, in canonical order."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    colors = tuple(colors)
    return [Partition(labels, 0, colors) for labels in _enumerate_labels(k, filter)]


# -------------------------------------------------------------- lattice basics

def _find(parent: list[int], a: int) -> int:
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


def _union_labels(n: int, label_rows: Iterable[Sequence[int]]) -> list[int]:
    parent = list(range(n))
    for labels in label_rows:
        first: dict[int, int] = {}
        for p, b in enumerate(labels):
            if b in first:
                ra, rb = _find(parent, first[b]), _find(parent, p)
                if ra != rb:
                    parent[rb] = ra
            else:
                first[b] = p
    return [_find(parent, p) for p in range(n)]


def _check_same_points(pi: Partition, sigma: Partition) -> None:
    if pi.size != sigma.size or pi.upper != sigma.upper:
        raise ValueError("partitions live on different point sets")


def join(pi: Partition, sigma: Partition) -> Partition:
    """The finest partition coarser than both (colors taken from pi)."""
    _check_same_points(pi, sigma)
    roots = _union_labels(pi.size, (pi.labels, sigma.labels))
    return Partition.from_labels(roots, pi.upper, pi.colors)


def block_count_join(pi: Partition, sigma: Partition) -> int:
    _check_same_points(pi, sigma)
    return len(set(_union_labels(pi.size, (pi.labels, sigma.labels))))


def refines(sigma: Partition, pi: Partition) -> bool:
    """True iff sigma <= pi, i.e. every block of sigma lies inside a block of pi."""
    _check_same_points(pi, sigma)
    image: dict[int, int] = {}
    for a, b in zip(sigma.labels, pi.labels):
        if image.setdefault(a, b) != b:
            return False
    return True


def kernel(i: Sequence[int], j: Sequence[int] | None = None) -> Partition:
    """ker(i) on one row, or ker(i/j) with i on top and j on the bottom."""
    if j is None:
        return Partition.from_labels(i)
    return Partition.from_labels(tuple(i) + tuple(j), upper=len(i))


def _index_values(pi: Partition, i: Sequence[int], j: Sequence[int] | None) -> tuple[int, ...]:
    if j is None:
        if len(i) != pi.size:
            raise ValueError(f"index of length {len(i)} does not fit {pi.size} points")
        return tuple(i)
    if len(i) != pi.upper or len(j) != pi.lower:
        raise ValueError("index lengths do not match the rows of the partition")
    return tuple(i) + tuple(j)


def delta(pi: Partition, i: Sequence[int], j: Sequence[int] | None = None) -> int:
    """1 if every block of pi carries a constant index value, else 0.

    With ``j`` omitted, ``i`` indexes all points of pi in reading order.
    """
    values = _index_values(pi, i, j)
    seen: dict[int, int] = {}
    for b, v in zip(pi.labels, values):
        if seen.setdefault(b, v) != v:
            return 0
    return 1


# ------------------------------------------------------------ crossings, sign

def _clockwise_labels(pi: Partition) -> list[int]:
    return [pi.labels[q] for q in pi.clockwise()]


def _crossings_of_strings(strings: list[tuple[int, int]]) -> int:
    count = 0
    for (a, b), (c, d) in combinations(strings, 2):
        if a < c < b < d or c < a < d < b:
            count += 1
    return count


def crossing_count(pi: Partition) -> int:
    """Number of crossing pairs of strings of a pairing, drawn inside the rectangle."""
    if not pi.is_pairing:
        raise ValueError("crossing_count needs a pairing")
    pos: dict[int, list[int]] = defaultdict(list)
    for n, b in enumerate(_clockwise_labels(pi)):
        pos[b].append(n)
    return _crossings_of_strings([tuple(v) for v in pos.values()])


def _sequence_noncrossing(seq: Sequence[int]) -> bool:
    last = {b: n for n, b in enumerate(seq)}
    opened: set[int] = set()
    stack: list[int] = []
    for n, b in enumerate(seq):
        if b in opened:
            if stack[-1] != b:
                return False
        elif last[b] != n:
            opened.add(b)
            stack.append(b)
        if last[b] == n and b in opened:
            stack.pop()
    return True


def is_noncrossing(pi: Partition) -> bool:
    return _sequence_noncrossing(_clockwise_labels(pi))


def signature(tau: Partition) -> int:
    """The sign of an even partition: +1 or -1.

    Pair consecutive legs of each block in clockwise order and take the
    crossing parity of the resulting pairing.
    """
    if not tau.is_even:
        raise ValueError("signature needs a partition with even blocks")
    pos: dict[int, list[int]] = defaultdict(list)
    for n, b in enumerate(_clockwise_labels(tau)):
        pos[b].append(n)
    strings = [(legs[a], legs[a + 1]) for legs in pos.values() for a in range(0, len(legs), 2)]
    return -1 if _crossings_of_strings(strings) % 2 else 1


def twisted_delta(pi: Partition, i: Sequence[int], j: Sequence[int] | None = None) -> int:
    """The signature of ker(i/j) when pi fits the index, else 0."""
    if not pi.is_even:
        raise ValueError("twisted_delta needs a partition with even blocks")
    if not delta(pi, i, j):
        return 0
    values = _index_values(pi, i, j)
    return signature(Partition.from_labels(values, pi.upper))


# -------------------------------------------------------------------- Mobius

def interval(sigma: Partition, pi: Partition) -> list[Partition]:
    """All tau with sigma <= tau <= pi."""
    if not refines(sigma, pi):
        return []
    groups: dict[int, list[int]] = defaultdict(list)
    for b, block in enumerate(sigma.blocks):
        groups[pi.labels[block[0]]].append(b)
    group_list = list(groups.values())
    out = []
    for choice in product(*(list(_set_partitions(len(g))) for g in group_list)):
        merged = {}
        for gi, (group, rgs) in enumerate(zip(group_list, choice)):
            for b, lab in zip(group, rgs):
                merged[b] = (gi, lab)
        out.append(Partition.from_labels((merged[b] for b in sigma.labels),
                                         sigma.upper, sigma.colors))
    return out


def mobius(sigma: Partition, pi: Partition,
           within: Callable[[Partition], bool] | None = None) -> int:
    """Mobius function of the partition lattice, or of the subposet ``within``."""
    if not refines(sigma, pi):
        return 0
    taus = [t for t in interval(sigma, pi) if within is None or within(t)]
    taus.sort(key=lambda t: -t.n_blocks)
    mu: dict[Partition, int] = {}
    for t in taus:
        if t.labels == sigma.labels:
            mu[t] = 1
        else:
            mu[t] = -sum(v for r, v in mu.items() if refines(r, t))
    for t, v in mu.items():
        if t.labels == pi.labels:
            return v
    return 0


# ------------------------------------------------------------- fatten/shrink

def fatten(pi: Partition) -> Partition:
    """NC(k) -> NC2(2k): point a becomes legs 2a-1, 2a."""
    if pi.upper or not is_noncrossing(pi):
        raise ValueError("fatten needs a one-row noncrossing partition")
    owner = [0] * (2 * pi.size)
    for b, block in enumerate(pi.blocks):
        m = len(block)
        for n, a in enumerate(block):
            nxt = block[(n + 1) % m]
            owner[2 * a + 1] = (b, n)
            owner[2 * nxt] = (b, n)
    return Partition.from_labels(owner)


def shrink(sigma: Partition) -> Partition:
    """NC2(2k) -> NC(k): collapse legs 2i-1, 2i to the point i."""
    if sigma.upper or sigma.size % 2 or not sigma.is_pairing or not is_noncrossing(sigma):
        raise ValueError("shrink needs a one-row noncrossing pairing on an even number of points")
    k = sigma.size // 2
    roots = _union_labels(sigma.size, (sigma.labels, [q // 2 for q in range(sigma.size)]))
    return Partition.from_labels(roots[2 * a] for a in range(k))


# ------------------------------------------------------ diagram operations

def identity(color: int = WHITE) -> Partition:
    return Partition((0, 0), 1, (color, color))


def cap(colors: Sequence[int] = (WHITE, WHITE)) -> Partition:
    """The semicircle with no upper points and two joined lower points."""
    return Partition((0, 0), 0, tuple(colors))


def cup(colors: Sequence[int] = (WHITE, WHITE)) -> Partition:
    """The semicircle with two joined upper points and no lower points."""
    return Partition((0, 0), 2, tuple(colors))


def basic_crossing() -> Partition:
    return kernel((1, 2), (2, 1))


def half_crossing() -> Partition:
    return kernel((1, 2, 3), (3, 2, 1))


def tensor(pi: Partition, sigma: Partition) -> Partition:
    """Horizontal concatenation, pi on the left."""
    off = pi.n_blocks
    up = pi.labels[:pi.upper] + tuple(b + off for b in sigma.labels[:sigma.upper])
    down = pi.labels[pi.upper:] + tuple(b + off for b in sigma.labels[sigma.upper:])
    colors = pi.upper_word + sigma.upper_word + pi.lower_word + sigma.lower_word
    return Partition.from_labels(up + down, pi.upper + sigma.upper, colors)


def compose(pi: Partition, sigma: Partition) -> tuple[Partition, int]:
    """Stack sigma on top of pi (sigma acts first) and erase closed loops.

    Returns the composite and the number of erased middle components.
    """
    if sigma.lower_word != pi.upper_word:
        raise ValueError("middle words do not match")
    k, m, l = sigma.upper, sigma.lower, pi.lower
    n = k + m + l
    pi_points = list(range(k, k + m)) + list(range(k + m, n))
    rows = [list(sigma.labels) + [-1 - q for q in range(l)],
            [-1 - q for q in range(k)] + [None] * (m + l)]
    for q, b in zip(pi_points, pi.labels):
        rows[1][q] = ("pi", b)
    roots = _union_labels(n, rows)
    outer = list(range(k)) + list(range(k + m, n))
    outer_roots = {roots[q] for q in outer}
    loops = len({roots[q] for q in range(k, k + m)} - outer_roots)
    result = Partition.from_labels((roots[q] for q in outer), k,
                                   sigma.upper_word + pi.lower_word)
    return result, loops


def conjugate(pi: Partition) -> Partition:
    """Turn the diagram upside down and switch all colors."""
    labels = pi.labels[pi.upper:] + pi.labels[:pi.upper]
    colors = tuple(1 - c for c in pi.lower_word + pi.upper_word)
    return Partition.from_labels(labels, pi.lower, colors)


def apply_T(pi: Partition, N: int, v) -> np.ndarray:
    """Apply the linear map of pi to a tensor of shape (N,)*upper."""
    if N < 1:
        raise ValueError("N must be positive")
    v = np.asarray(v, dtype=object)
    if v.shape != (N,) * pi.upper:
        raise ValueError(f"tensor shape {v.shape} does not match {(N,) * pi.upper}")
    out = np.empty((N,) * pi.lower, dtype=object)
    ins = list(product(range(N), repeat=pi.upper))
    for j in product(range(N), repeat=pi.lower):
        total = Fraction(0)
        for i in ins:
            if delta(pi, i, j):
                total += Fraction(v[i])
        out[j] = total
    return out
