"""Gram and Weingarten matrices, and the integration formulas built on them."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Sequence

from . import linalg
from .categories import (
    CategoryId, EasyGroupId, category_of, enumerate_category, parse_group,
)
from .partitions import (
    ColoredWord, Partition, block_count_join, delta, parse_word, twisted_delta, white_word,
)

MODES = ("strict", "pseudo")
_SOLVE_THRESHOLD = 60


class SingularGramError(ZeroDivisionError):
    """The Gram matrix is singular; ``dependent`` names partitions in a linear relation."""

    def __init__(self, category: CategoryId, word: ColoredWord, N: int,
                 dependent: Sequence[Partition]):
        self.category, self.word, self.N = category, word, N
        self.dependent = tuple(dependent)
        names = ", ".join(str(p) for p in self.dependent)
        super().__init__(f"Gram matrix of {category} on {len(word)} points is singular "
                         f"at N={N}; dependent partitions: {names}")


def as_word(word: Sequence[int] | str | int) -> ColoredWord:
    if isinstance(word, str):
        return parse_word(word)
    if isinstance(word, int):
        return white_word(word)
    return tuple(word)


def as_group(group: EasyGroupId | str) -> EasyGroupId:
    return parse_group(group) if isinstance(group, str) else group


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")


@dataclass(frozen=True)
class PartitionMatrix:
    """A square exact matrix whose rows and columns are indexed by partitions."""

    index: tuple[Partition, ...]
    entries: tuple[tuple[Fraction, ...], ...]
    _position: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.entries) != len(self.index) or any(len(r) != len(self.index)
                                                       for r in self.entries):
            raise ValueError("matrix shape does not match its index")
        object.__setattr__(self, "_position", {p: n for n, p in enumerate(self.index)})

    def __len__(self) -> int:
        return len(self.index)

    def __getitem__(self, key: tuple) -> Fraction:
        a, b = key
        if isinstance(a, Partition):
            a = self._position[a]
        if isinstance(b, Partition):
            b = self._position[b]
        return self.entries[a][b]

    def rows(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]

    def __matmul__(self, other: "PartitionMatrix") -> "PartitionMatrix":
        if self.index != other.index:
            raise ValueError("matrices have different indices")
        prod = linalg.matmul(self.entries, other.entries)
        return PartitionMatrix(self.index, tuple(tuple(r) for r in prod))

    def trace(self) -> Fraction:
        return sum((Fraction(self.entries[a][a]) for a in range(len(self))), Fraction(0))

    def to_json(self) -> dict:
        return {"matrix_index": [str(p) for p in self.index],
                "entries": [[str(x) for x in row] for row in self.entries]}


# ---------------------------------------------------------------- matrices

@lru_cache(maxsize=None)
def _join_counts(category: CategoryId, word: ColoredWord) -> tuple[tuple[int, ...], ...]:
    D = enumerate_category(category, word)
    counts = [[0] * len(D) for _ in D]
    for a, p in enumerate(D):
        for b in range(a, len(D)):
            counts[a][b] = counts[b][a] = block_count_join(p, D[b])
    return tuple(tuple(r) for r in counts)


def _gram_rows(category: CategoryId, word: ColoredWord, N: int) -> list[list[int]]:
    if N < 1:
        raise ValueError("N must be a positive integer")
    return [[N ** c for c in row] for row in _join_counts(category, word)]


def gram(category: CategoryId, word: Sequence[int] | str | int, N: int) -> PartitionMatrix:
    """G(pi, sigma) = N^{|pi v sigma|} over the canonical D(k)."""
    word = category.normalize_word(as_word(word))
    D = tuple(enumerate_category(category, word))
    return PartitionMatrix(D, tuple(tuple(r) for r in _gram_rows(category, word, N)))


_W_CACHE: dict[tuple, PartitionMatrix] = {}
_W_LOCK = threading.Lock()


def weingarten(category: CategoryId, word: Sequence[int] | str | int, N: int,
               mode: str = "strict") -> PartitionMatrix:
    """The inverse of the Gram matrix.

    In ``pseudo`` mode a singular Gram matrix is inverted on a maximal
    independent set of partitions and extended by zeros, which gives a
    generalized inverse W with G W G = G.
    """
    _check_mode(mode)
    word = category.normalize_word(as_word(word))
    key = (category, word, N, mode)
    cached = _W_CACHE.get(key)
    if cached is not None:
        return cached
    D = tuple(enumerate_category(category, word))
    rows = _gram_rows(category, word, N)
    try:
        inv = linalg.inverse(rows)
    except linalg.SingularMatrixError as exc:
        if mode == "strict":
            raise SingularGramError(category, word, N, [D[c] for c in exc.dependent]) from None
        basis = linalg.independent_columns(rows)
        sub = linalg.inverse([[rows[a][b] for b in basis] for a in basis])
        inv = [[Fraction(0)] * len(D) for _ in D]
        for x, a in enumerate(basis):
            for y, b in enumerate(basis):
                inv[a][b] = sub[x][y]
    result = PartitionMatrix(D, tuple(tuple(r) for r in inv))
    with _W_LOCK:
        return _W_CACHE.setdefault(key, result)


def _apply_weingarten(category: CategoryId, word: ColoredWord, N: int,
                      b: Sequence[int], mode: str) -> list[Fraction]:
    """W b, by a linear solve when W is large and not yet known."""
    D = enumerate_category(category, word)
    if not any(b):
        return [Fraction(0)] * len(D)
    if mode == "strict" and len(D) > _SOLVE_THRESHOLD \
            and (category, word, N, mode) not in _W_CACHE:
        try:
            return linalg.solve(_gram_rows(category, word, N), b)
        except linalg.SingularMatrixError as exc:
            raise SingularGramError(category, word, N, [D[c] for c in exc.dependent]) from None
    W = weingarten(category, word, N, mode)
    return [sum((W.entries[a][c] * x for c, x in enumerate(b) if x), Fraction(0))
            for a in range(len(D))]


def _bilinear(category: CategoryId, word: ColoredWord, N: int, a: Sequence[int],
              b: Sequence[int], mode: str) -> Fraction:
    if not any(a) or not any(b):
        return Fraction(0)
    x = _apply_weingarten(category, word, N, b, mode)
    return sum((u * v for u, v in zip(a, x) if u), Fraction(0))


# ---------------------------------------------------------------- integrals

def _check_index(index: Sequence[int], N: int, name: str) -> tuple[int, ...]:
    index = tuple(index)
    if any(not 1 <= v <= N for v in index):
        raise ValueError(f"{name} entries must lie in 1..{N}")
    return index


@dataclass(frozen=True)
class IntegralSpec:
    """The integral of u_{i1 j1}^{e1} ... u_{ik jk}^{ek} over an easy group."""

    group: EasyGroupId
    N: int
    word: ColoredWord
    i: tuple[int, ...]
    j: tuple[int, ...]
    twist: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "group", as_group(self.group))
        object.__setattr__(self, "word", as_word(self.word))
        if self.N < 1:
            raise ValueError("N must be a positive integer")
        object.__setattr__(self, "i", _check_index(self.i, self.N, "i"))
        object.__setattr__(self, "j", _check_index(self.j, self.N, "j"))
        if not len(self.i) == len(self.j) == len(self.word):
            raise ValueError("index lengths must equal the word length")

    @property
    def twisted(self) -> bool:
        return self.twist or self.group.twisted


def _deltas(D: Sequence[Partition], index: Sequence[int], twisted: bool) -> list[int]:
    if twisted:
        if not all(p.is_even for p in D):
            raise ValueError("twisting needs a category of even partitions")
        return [twisted_delta(p, index) for p in D]
    return [delta(p, index) for p in D]


def integrate_group(spec: IntegralSpec, mode: str = "strict") -> Fraction:
    _check_mode(mode)
    cat = category_of(spec.group)
    word = cat.normalize_word(spec.word)
    D = enumerate_category(cat, word)
    a = _deltas(D, spec.i, spec.twisted)
    b = _deltas(D, spec.j, spec.twisted)
    return _bilinear(cat, word, spec.N, a, b, mode)


def integrate(group: EasyGroupId | str, N: int, word, i: Sequence[int], j: Sequence[int],
              twist: bool = False, mode: str = "strict") -> Fraction:
    return integrate_group(IntegralSpec(as_group(group), N, as_word(word), i, j, twist), mode)


def integrate_sphere(group: EasyGroupId | str, N: int, word, i: Sequence[int],
                     twist: bool = False, mode: str = "strict") -> Fraction:
    """Sphere coordinates are the first row of the fundamental matrix: x_i = u_{1i}."""
    word = as_word(word)
    return integrate(group, N, word, (1,) * len(word), i, twist, mode)


TORUS_RELATIONS = ("free", "abelian", "order2-free", "order2-abelian")


def integrate_torus(group_word: Sequence[tuple[int, int]], relations: str) -> int:
    """1 if the word in the generators is trivial in the torus group, else 0."""
    if relations not in TORUS_RELATIONS:
        raise ValueError(f"relations must be one of {TORUS_RELATIONS}")
    if relations in ("abelian", "order2-abelian"):
        sums: dict[int, int] = {}
        for g, e in group_word:
            sums[g] = sums.get(g, 0) + e
        mod = 2 if relations == "order2-abelian" else 0
        return int(all((s % mod if mod else s) == 0 for s in sums.values()))
    stack: list[list[int]] = []
    for g, e in group_word:
        if relations == "order2-free":
            e %= 2
        if e == 0:
            continue
        if stack and stack[-1][0] == g:
            stack[-1][1] += e
            if relations == "order2-free":
                stack[-1][1] %= 2
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([g, e])
    return int(not stack)


def char_moment(group: EasyGroupId | str, N: int, word, s: int,
                twist: bool = False, mode: str = "strict") -> Fraction:
    """The moment of the truncated character u_11 + ... + u_ss, as Tr(W_N G_s).

    The twisted signs cancel in pairs along the diagonal, so twisting does
    not change these moments.
    """
    if not 1 <= s <= N:
        raise ValueError("the truncation index must satisfy 1 <= s <= N")
    g = as_group(group)
    cat = category_of(g)
    word = cat.normalize_word(as_word(word))
    if twist or g.twisted:
        D = enumerate_category(cat, word)
        if not all(p.is_even for p in D):
            raise ValueError("twisting needs a category of even partitions")
    W = weingarten(cat, word, N, mode)
    Gs = _gram_rows(cat, word, s)
    n = len(W)
    return sum((W.entries[a][b] * Gs[b][a] for a in range(n) for b in range(n)), Fraction(0))


def char_moment_limit(group: EasyGroupId | str, t: Fraction | int | str, word) -> Fraction:
    """Sum over D(k) of t^{|pi|}: the large-N moment of the character truncated at tN."""
    t = Fraction(t)
    cat = category_of(as_group(group))
    word = cat.normalize_word(as_word(word))
    return sum((t ** p.n_blocks for p in enumerate_category(cat, word)), Fraction(0))


# ------------------------------------------------------ homogeneous spaces

@dataclass(frozen=True)
class HomSpaceSpec:
    """Coordinates of the space of rank-L partial isometries from C^N to C^M."""

    group: EasyGroupId
    M: int
    N: int
    L: int
    word: ColoredWord
    i: tuple[int, ...]
    j: tuple[int, ...]
    twist: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "group", as_group(self.group))
        object.__setattr__(self, "word", as_word(self.word))
        if not 1 <= self.L <= min(self.M, self.N):
            raise ValueError("need 1 <= L <= min(M, N)")
        object.__setattr__(self, "i", _check_index(self.i, self.M, "i"))
        object.__setattr__(self, "j", _check_index(self.j, self.N, "j"))
        if not len(self.i) == len(self.j) == len(self.word):
            raise ValueError("index lengths must equal the word length")


def integrate_homspace(spec: HomSpaceSpec, mode: str = "strict") -> Fraction:
    """(W_M a)^T G_L (W_N b), with a, b the delta vectors of i and j."""
    _check_mode(mode)
    twisted = spec.twist or spec.group.twisted
    cat = category_of(spec.group)
    word = cat.normalize_word(spec.word)
    D = enumerate_category(cat, word)
    x = _apply_weingarten(cat, word, spec.M, _deltas(D, spec.i, twisted), mode)
    y = _apply_weingarten(cat, word, spec.N, _deltas(D, spec.j, twisted), mode)
    GL = _gram_rows(cat, word, spec.L)
    return sum((x[a] * GL[a][b] * y[b] for a in range(len(D)) if x[a]
                for b in range(len(D)) if y[b]), Fraction(0))


def chi_E_moment(group: EasyGroupId | str, M: int, N: int, L: int, K: int, word,
                 mode: str = "strict") -> Fraction:
    """Moment of the sum of the entries indexed by a K-element set, as Tr(W_M G_L W_N G_K)."""
    if K > min(M, N):
        raise ValueError("need K <= min(M, N)")
    cat = category_of(as_group(group))
    word = cat.normalize_word(as_word(word))
    WM = weingarten(cat, word, M, mode)
    WN = weingarten(cat, word, N, mode)
    GL = _gram_rows(cat, word, L)
    GK = _gram_rows(cat, word, K)
    prod = linalg.matmul(linalg.matmul(linalg.matmul(WM.entries, GL), WN.entries), GK)
    return sum((prod[a][a] for a in range(len(prod))), Fraction(0))


def bp_regime_limit(group: EasyGroupId | str, kappa, lam, mu, word) -> Fraction:
    """Limit of chi_E_moment with K = kappa N, L = lam N, M = mu N, N large."""
    kappa, lam, mu = Fraction(kappa), Fraction(lam), Fraction(mu)
    if min(kappa, lam, mu) <= 0:
        raise ValueError("kappa, lambda and mu must be positive")
    return char_moment_limit(group, kappa * lam / mu, word)


# ------------------------------------------------------------ affine spaces

@dataclass(frozen=True)
class AffineValue:
    """The number ``coefficient * sqrt(radicand)``; radicand 1 means exactly rational."""

    coefficient: Fraction
    radicand: int = 1

    @classmethod
    def power(cls, coefficient: Fraction, base: int, half_power: int) -> "AffineValue":
        """coefficient * base^(half_power / 2), folded into canonical form."""
        coefficient = Fraction(coefficient)
        whole, odd = divmod(half_power, 2)
        coefficient *= Fraction(base) ** whole
        radicand = base if odd else 1
        root = isqrt(radicand)
        if root * root == radicand:
            coefficient *= root
            radicand = 1
        if coefficient == 0:
            radicand = 1
        return cls(coefficient, radicand)

    @property
    def exact(self) -> Fraction | None:
        return self.coefficient if self.radicand == 1 else None

    def __float__(self) -> float:
        return float(self.coefficient) * self.radicand ** 0.5

    def __str__(self) -> str:
        if self.radicand == 1:
            return str(self.coefficient)
        return f"{self.coefficient}*sqrt({self.radicand})"


@dataclass(frozen=True)
class AffineSpaceSpec:
    group: EasyGroupId
    N: int
    I: frozenset[int]
    word: ColoredWord
    i: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "group", as_group(self.group))
        object.__setattr__(self, "word", as_word(self.word))
        object.__setattr__(self, "I", frozenset(self.I))
        if not self.I or any(not 1 <= v <= self.N for v in self.I):
            raise ValueError("I must be a nonempty subset of 1..N")
        object.__setattr__(self, "i", _check_index(self.i, self.N, "i"))
        if len(self.i) != len(self.word):
            raise ValueError("index length must equal the word length")


def affine_weight(pi: Partition, size_I: int) -> Fraction:
    """K_I(pi) times |I|^{k/2}: the number of indices in I^k fitting pi."""
    return Fraction(size_I) ** pi.n_blocks


def integrate_affine(spec: AffineSpaceSpec, mode: str = "strict") -> AffineValue:
    """Sum of K_I(pi) delta_sigma(i) W(pi, sigma), K_I(pi) = |I|^{|pi| - k/2}."""
    _check_mode(mode)
    cat = category_of(spec.group)
    word = cat.normalize_word(spec.word)
    D = enumerate_category(cat, word)
    x = _apply_weingarten(cat, word, spec.N, _deltas(D, spec.i, False), mode)
    size = len(spec.I)
    total = sum((affine_weight(p, size) * v for p, v in zip(D, x)), Fraction(0))
    return AffineValue.power(total, size, -len(word))


# ---------------------------------------------------------- hypergeometric

def hypergeometric_equality(n: int, k: int, mode: str = "strict") -> tuple[Fraction, Fraction]:
    """Both sides of the identity between the 2k-th moment of a free orthogonal
    coordinate and the k-th moment of the normalized block sum over the free
    permutation group on n^2 points."""
    if n < 2 or k < 0:
        raise ValueError("need n >= 2 and k >= 0")
    O_free = category_of(EasyGroupId("O", "free"))
    S_free = category_of(EasyGroupId("S", "free"))
    W = weingarten(O_free, 2 * k, n, mode)
    lhs = sum((x for row in W.entries for x in row), Fraction(0))
    V = weingarten(S_free, k, n * n, mode)
    rhs = Fraction(0)
    for a, p in enumerate(V.index):
        for b, q in enumerate(V.index):
            rhs += Fraction(n) ** (p.n_blocks + q.n_blocks - k) * V.entries[a][b]
    return lhs, rhs
