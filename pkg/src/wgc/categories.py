"""Categories of partitions, their membership rules and the easy groups they encode."""

from __future__ import annotations

import os
import re
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .partitions import (
    BLACK, WHITE, ColoredWord, Partition, cap, compose, conjugate,
    enumerate_partitions, identity, is_noncrossing, tensor, white_word,
)

DEFAULT_MAX_POINTS = 12


class BoundExceeded(ValueError):
    """Raised when a computation would exceed the point bound."""


def max_points() -> int:
    return int(os.environ.get("WGC_MAX_POINTS", DEFAULT_MAX_POINTS))


# tag -> (block rule, noncrossing, colored)
_TAGS: dict[str, tuple[str, bool, bool]] = {
    "P": ("all", False, False),
    "NC": ("all", True, False),
    "P2": ("pairings", False, False),
    "NC2": ("pairings", True, False),
    "P2colored": ("pairings", False, True),
    "NC2colored": ("pairings", True, True),
    "P2star": ("pairings", False, False),
    "P2starColored": ("pairings", False, True),
    "P2bar": ("pairings", False, True),
    "P2mod": ("pairings", False, True),
    "Peven": ("even", False, False),
    "NCeven": ("even", True, False),
    "PevenColored": ("even", False, True),
    "NCevenColored": ("even", True, True),
    "PevenStar": ("even", False, False),
    "PevenStarColored": ("even", False, True),
    "PevenInfty": ("even", False, False),
    "PevenMod": ("even", False, True),
    "PevenBlockMod": ("even", False, True),
    "P12": ("singletons-pairings", False, False),
    "NC12": ("singletons-pairings", True, False),
}
_PARAM_TAGS = {"P2mod", "PevenMod", "PevenBlockMod"}


@dataclass(frozen=True)
class CategoryId:
    """A named category; ``param`` is r or s, with None standing for infinity."""

    tag: str
    param: int | None = None

    def __post_init__(self) -> None:
        if self.tag not in _TAGS:
            raise ValueError(f"unknown category tag {self.tag!r}")
        if self.tag in _PARAM_TAGS:
            if self.param is not None and self.param < 1:
                raise ValueError("r must be a positive integer or infinity")
            if self.tag == "PevenBlockMod" and self.param is not None and self.param % 2:
                raise ValueError("s must be even or infinity")
        elif self.param is not None:
            raise ValueError(f"{self.tag} takes no parameter")

    @property
    def colored(self) -> bool:
        return _TAGS[self.tag][2]

    @property
    def block_rule(self) -> str:
        return _TAGS[self.tag][0]

    @property
    def noncrossing(self) -> bool:
        return _TAGS[self.tag][1]

    def normalize_word(self, word: Sequence[int]) -> ColoredWord:
        """Colors matter only for colored categories."""
        return tuple(word) if self.colored else white_word(len(word))

    def __str__(self) -> str:
        return category_name(self)


# ----------------------------------------------------------------- predicates

def _flattened(pi: Partition) -> list[tuple[int, int]]:
    """(block, color) in clockwise order, upper legs rotated down with colors switched."""
    out = []
    for q in pi.clockwise():
        color = pi.colors[q]
        if q < pi.upper:
            color = 1 - color
        out.append((pi.labels[q], color))
    return out


def _block_color_excess(pi: Partition) -> list[int]:
    excess = [0] * pi.n_blocks
    for b, color in _flattened(pi):
        excess[b] += 1 if color == WHITE else -1
    return excess


def _alternating_balanced(pi: Partition) -> bool:
    excess = [0] * pi.n_blocks
    for n, q in enumerate(pi.clockwise()):
        excess[pi.labels[q]] += 1 if n % 2 == 0 else -1
    return not any(excess)


def _reduces_in_free_z2(pi: Partition) -> bool:
    stack: list[int] = []
    for q in pi.clockwise():
        b = pi.labels[q]
        if stack and stack[-1] == b:
            stack.pop()
        else:
            stack.append(b)
    return not stack


def _mod_zero(value: int, r: int | None) -> bool:
    return value == 0 if r is None else value % r == 0


def _block_rule_ok(rule: str, pi: Partition) -> bool:
    sizes = pi.block_sizes
    if rule == "pairings":
        return all(s == 2 for s in sizes)
    if rule == "even":
        return all(s % 2 == 0 for s in sizes)
    if rule == "singletons-pairings":
        return all(s <= 2 for s in sizes)
    return True


def member(c: CategoryId, pi: Partition) -> bool:
    if not _block_rule_ok(c.block_rule, pi):
        return False
    if c.noncrossing and not is_noncrossing(pi):
        return False
    tag = c.tag
    if tag in ("P2colored", "NC2colored", "PevenColored", "NCevenColored"):
        return not any(_block_color_excess(pi))
    if tag in ("P2star", "PevenStar"):
        return _alternating_balanced(pi)
    if tag in ("P2starColored", "PevenStarColored"):
        return _alternating_balanced(pi) and not any(_block_color_excess(pi))
    if tag == "P2bar":
        return sum(_block_color_excess(pi)) == 0
    if tag in ("P2mod", "PevenMod"):
        return _mod_zero(sum(_block_color_excess(pi)), c.param)
    if tag == "PevenBlockMod":
        return all(_mod_zero(e, c.param) for e in _block_color_excess(pi))
    if tag == "PevenInfty":
        return _reduces_in_free_z2(pi)
    return True


def _check_bound(points: int, bound: int | None = None) -> None:
    limit = max_points() if bound is None else bound
    if points > limit:
        raise BoundExceeded(f"{points} points exceed the bound of {limit}")


@lru_cache(maxsize=None)
def _enumerate_cached(c: CategoryId, word: ColoredWord) -> tuple[Partition, ...]:
    kind = c.block_rule
    if c.noncrossing:
        kind = "noncrossing" if kind == "all" else "noncrossing-" + kind
    return tuple(p for p in enumerate_partitions(len(word), kind, word) if member(c, p))


def enumerate_category(c: CategoryId, word: Sequence[int]) -> list[Partition]:
    """D(k): members of c with no upper points and lower color word ``word``."""
    _check_bound(len(word))
    return list(_enumerate_cached(c, tuple(word)))


# ----------------------------------------------------------------- closure

def closure(generators: Iterable[Partition], max_points: int = 8,
            colored: bool = False, slack: int = 2) -> list[Partition]:
    """Smallest family containing the generators, identity and semicircle that is
    closed under tensor, composition and conjugation, cut at ``max_points``.

    The search runs on diagrams of up to ``max_points + slack`` points, since
    some small diagrams only arise by composing larger ones (nesting a
    semicircle needs two extra legs).  Uncolored closures whiten every
    diagram; colored ones adjoin both colored identities and semicircles.
    """
    if max_points > DEFAULT_MAX_POINTS:
        raise BoundExceeded(f"closure bound {max_points} exceeds {DEFAULT_MAX_POINTS}")
    limit = max_points
    max_points = max_points + slack
    if colored:
        seeds = [identity(WHITE), identity(BLACK), cap((WHITE, BLACK)), cap((BLACK, WHITE))]
        start = list(generators)
    else:
        seeds = [identity(), cap()]
        start = [g.with_colors(white_word(g.size)) for g in generators]

    known: set[Partition] = set()
    by_upper: dict[ColoredWord, list[Partition]] = defaultdict(list)
    by_lower: dict[ColoredWord, list[Partition]] = defaultdict(list)
    by_size: dict[int, list[Partition]] = defaultdict(list)
    queue = [p for p in start + seeds if p.size <= max_points]
    while queue:
        x = queue.pop()
        if x in known:
            continue
        known.add(x)
        by_upper[x.upper_word].append(x)
        by_lower[x.lower_word].append(x)
        by_size[x.size].append(x)
        flipped = conjugate(x)
        found = [flipped if colored else flipped.with_colors(white_word(x.size))]
        for size in range(max_points - x.size + 1):
            for y in by_size[size]:
                found.append(tensor(x, y))
                found.append(tensor(y, x))
        for y in by_lower[x.upper_word]:
            if y.upper + x.lower <= max_points:
                found.append(compose(x, y)[0])
        for y in by_upper[x.lower_word]:
            if x.upper + y.lower <= max_points:
                found.append(compose(y, x)[0])
        queue.extend(p for p in found if p.size <= max_points and p not in known)
    return sorted((p for p in known if p.size <= limit), key=Partition.sort_key)


# --------------------------------------------------------------- easy groups

FAMILIES = ("O", "U", "H", "K", "S", "B")
LIBERATIONS = ("classical", "half", "free")

_GROUP_TABLE: dict[tuple[str, str], CategoryId] = {
    ("O", "classical"): CategoryId("P2"),
    ("O", "half"): CategoryId("P2star"),
    ("O", "free"): CategoryId("NC2"),
    ("U", "classical"): CategoryId("P2colored"),
    ("U", "half"): CategoryId("P2starColored"),
    ("U", "free"): CategoryId("NC2colored"),
    ("H", "classical"): CategoryId("Peven"),
    ("H", "half"): CategoryId("PevenStar"),
    ("H", "free"): CategoryId("NCeven"),
    ("K", "classical"): CategoryId("PevenColored"),
    ("K", "half"): CategoryId("PevenStarColored"),
    ("K", "free"): CategoryId("NCevenColored"),
    ("S", "classical"): CategoryId("P"),
    ("S", "free"): CategoryId("NC"),
    ("B", "classical"): CategoryId("P12"),
    ("B", "free"): CategoryId("NC12"),
}


@dataclass(frozen=True)
class EasyGroupId:
    family: str
    liberation: str = "classical"
    twisted: bool = False

    def __post_init__(self) -> None:
        if self.family not in FAMILIES or self.liberation not in LIBERATIONS:
            raise ValueError(f"unknown easy group {self.family}/{self.liberation}")
        if (self.family, self.liberation) not in _GROUP_TABLE:
            raise ValueError(f"no half-liberated version of the {self.family} family")

    def __str__(self) -> str:
        suffix = {"classical": "", "half": "*", "free": "+"}[self.liberation]
        return ("~" if self.twisted else "") + self.family.lower() + suffix


def category_of(g: EasyGroupId) -> CategoryId:
    return _GROUP_TABLE[(g.family, g.liberation)]


# ------------------------------------------------------------------- names

_SIMPLE_NAMES = {
    "p": CategoryId("P"), "nc": CategoryId("NC"),
    "p2": CategoryId("P2"), "nc2": CategoryId("NC2"),
    "p2*": CategoryId("P2star"), "p2bar": CategoryId("P2bar"),
    "peven": CategoryId("Peven"), "nceven": CategoryId("NCeven"),
    "peven*": CategoryId("PevenStar"), "peven[inf]": CategoryId("PevenInfty"),
    "p12": CategoryId("P12"), "nc12": CategoryId("NC12"),
    "cp2": CategoryId("P2colored"), "cnc2": CategoryId("NC2colored"),
    "cp2*": CategoryId("P2starColored"), "cpeven": CategoryId("PevenColored"),
    "cpeven*": CategoryId("PevenStarColored"),
    "cnceven": CategoryId("NCevenColored"),
}
_GROUP_ALIASES = {
    "o": ("O", "classical"), "o*": ("O", "half"), "o+": ("O", "free"),
    "u": ("U", "classical"), "u*": ("U", "half"), "u+": ("U", "free"),
    "h": ("H", "classical"), "h*": ("H", "half"), "h+": ("H", "free"),
    "k": ("K", "classical"), "k*": ("K", "half"), "k+": ("K", "free"),
    "s": ("S", "classical"), "s+": ("S", "free"),
    "b": ("B", "classical"), "b+": ("B", "free"),
}
_PARAM_RE = re.compile(r"^(p2\^r|peven\^r|peven\(s)=(\d+|inf)\)?$")


def parse_group(name: str) -> EasyGroupId:
    """Parse ``o``, ``o*``, ``o+`` and so on; a leading ``~`` marks the twisted version."""
    text = name.strip().lower()
    twisted = text.startswith("~")
    text = text.lstrip("~")
    if text not in _GROUP_ALIASES:
        raise ValueError(f"unknown group name {name!r}")
    family, liberation = _GROUP_ALIASES[text]
    return EasyGroupId(family, liberation, twisted)


def parse_category(name: str) -> CategoryId:
    text = name.strip().lower()
    if text in _SIMPLE_NAMES:
        return _SIMPLE_NAMES[text]
    m = _PARAM_RE.match(text)
    if m:
        head, value = m.groups()
        if head.startswith("peven(") != text.endswith(")"):
            raise ValueError(f"unknown category name {name!r}")
        param = None if value == "inf" else int(value)
        tag = {"p2^r": "P2mod", "peven^r": "PevenMod", "peven(s": "PevenBlockMod"}[head]
        return CategoryId(tag, param)
    if text.lstrip("~") in _GROUP_ALIASES:
        return category_of(parse_group(text))
    raise ValueError(f"unknown category name {name!r}")


def category_name(c: CategoryId) -> str:
    for name, cid in _SIMPLE_NAMES.items():
        if cid == c:
            return name
    value = "inf" if c.param is None else str(c.param)
    if c.tag == "P2mod":
        return f"p2^r={value}"
    if c.tag == "PevenMod":
        return f"peven^r={value}"
    return f"peven(s={value})"
