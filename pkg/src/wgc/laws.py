"""Moment sequences of the limiting laws, cumulants, and hyperspherical moments."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, factorial, prod
from typing import Sequence

from mpmath import mp
from mpmath.ctx_iv import MPIntervalContext

from .categories import CategoryId, enumerate_category
from .partitions import format_word, white_word
from .weingarten import integrate_sphere

# law tag -> (category, complex)
_LAWS: dict[str, tuple[CategoryId, bool]] = {
    "gaussian": (CategoryId("P2"), False),
    "semicircle": (CategoryId("NC2"), False),
    "complex-gaussian": (CategoryId("P2colored"), True),
    "circular": (CategoryId("NC2colored"), True),
    "poisson": (CategoryId("P"), False),
    "free-poisson": (CategoryId("NC"), False),
    "bessel": (CategoryId("Peven"), False),
    "free-bessel": (CategoryId("NCeven"), False),
    "complex-bessel": (CategoryId("PevenColored"), True),
    "complex-free-bessel": (CategoryId("NCevenColored"), True),
}
LAW_TAGS = tuple(_LAWS)


@dataclass(frozen=True)
class LawId:
    tag: str
    t: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        if self.tag not in _LAWS:
            raise ValueError(f"unknown law {self.tag!r}")
        object.__setattr__(self, "t", Fraction(self.t))
        if self.t <= 0:
            raise ValueError("the law parameter must be positive")

    @property
    def category(self) -> CategoryId:
        return _LAWS[self.tag][0]

    @property
    def is_complex(self) -> bool:
        return _LAWS[self.tag][1]

    def __str__(self) -> str:
        return f"{self.tag}:t={self.t}"


_LAW_RE = re.compile(r"^([a-z-]+)(?::t=([0-9]+(?:/[0-9]+)?))?$")


def parse_law(text: str) -> LawId:
    m = _LAW_RE.match(text.strip().lower())
    if not m:
        raise ValueError(f"cannot parse law {text!r}")
    return LawId(m.group(1), Fraction(m.group(2) or 1))


@dataclass(frozen=True)
class MomentSeq:
    """Moments M_0 = 1, M_1, ..., M_K; complex laws also carry the moments
    of every colored word, and ``values`` then holds the real-part moments."""

    values: tuple[Fraction, ...]
    source: str = ""
    colored: dict | None = None

    def __getitem__(self, k: int) -> Fraction:
        return self.values[k]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class CumulantSeq:
    """Cumulants c_1, ..., c_K, stored from index 1 (``values[0]`` is c_1)."""

    values: tuple[Fraction, ...]
    kind: str

    def __getitem__(self, n: int) -> Fraction:
        if n < 1:
            raise IndexError("cumulants start at order 1")
        return self.values[n - 1]

    def __len__(self) -> int:
        return len(self.values)


KINDS = ("classical", "free")


def _partition_sum(c: CategoryId, word, t: Fraction) -> Fraction:
    return sum((t ** p.n_blocks for p in enumerate_category(c, word)), Fraction(0))


def law_moments(law: LawId | str, up_to: int) -> MomentSeq:
    """M_k as the sum over D(k) of t^{|pi|}."""
    law = parse_law(law) if isinstance(law, str) else law
    if not law.is_complex:
        values = tuple(_partition_sum(law.category, white_word(k), law.t)
                       for k in range(up_to + 1))
        return MomentSeq(values, str(law))
    colored = {}
    real = []
    for k in range(up_to + 1):
        total = Fraction(0)
        for word in product((0, 1), repeat=k):
            m = _partition_sum(law.category, word, law.t)
            colored[format_word(word)] = m
            total += m
        real.append(total / 2 ** k)
    return MomentSeq(tuple(real), str(law), colored)


def _as_moments(m: MomentSeq | Sequence) -> tuple[Fraction, ...]:
    values = tuple(Fraction(x) for x in (m.values if isinstance(m, MomentSeq) else m))
    if not values or values[0] != 1:
        raise ValueError("moment sequences start with M_0 = 1")
    return values


def _convolution_powers(M: Sequence[Fraction], top: int) -> list[list[Fraction]]:
    """P[s][m] = sum over i_1 + ... + i_s = m of M_{i_1} ... M_{i_s}."""
    P = [[Fraction(int(m == 0)) for m in range(top + 1)]]
    for _ in range(top):
        last = P[-1]
        P.append([sum((last[a] * M[m - a] for a in range(m + 1)), Fraction(0))
                  for m in range(top + 1)])
    return P


def moments_to_cumulants(m: MomentSeq | Sequence, kind: str) -> CumulantSeq:
    """Invert M_n = sum over P(n) (or NC(n)) of products of block cumulants."""
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    M = _as_moments(m)
    top = len(M) - 1
    c: list[Fraction] = [Fraction(0)]
    if kind == "classical":
        for n in range(1, top + 1):
            c.append(M[n] - sum((comb(n - 1, s - 1) * c[s] * M[n - s] for s in range(1, n)),
                                Fraction(0)))
    else:
        P = _convolution_powers(M, top)
        for n in range(1, top + 1):
            c.append(M[n] - sum((c[s] * P[s][n - s] for s in range(1, n)), Fraction(0)))
    return CumulantSeq(tuple(c[1:]), kind)


def cumulants_to_moments(c: CumulantSeq) -> MomentSeq:
    top = len(c)
    M = [Fraction(1)]
    for n in range(1, top + 1):
        if c.kind == "classical":
            M.append(sum((comb(n - 1, s - 1) * c[s] * M[n - s] for s in range(1, n + 1)),
                         Fraction(0)))
        else:
            padded = M + [Fraction(0)] * (top + 1 - len(M))
            P = _convolution_powers(padded, n)
            M.append(sum((c[s] * P[s][n - s] for s in range(1, n + 1)), Fraction(0)))
    return MomentSeq(tuple(M), f"{c.kind} cumulants")


@dataclass(frozen=True)
class BPReport:
    ok: bool
    first_discrepancy: int | None
    classical_cumulants: tuple[Fraction, ...]
    free_cumulants: tuple[Fraction, ...]

    def __bool__(self) -> bool:
        return self.ok


def bp_check(classical: LawId | str | MomentSeq, free: LawId | str | MomentSeq,
             up_to: int) -> BPReport:
    """Compare classical cumulants of the first law with free cumulants of the second."""
    def moments(x):
        return x if isinstance(x, MomentSeq) else law_moments(x, up_to)
    kc = moments_to_cumulants(moments(classical).values[:up_to + 1], "classical").values
    kf = moments_to_cumulants(moments(free).values[:up_to + 1], "free").values
    for n, (a, b) in enumerate(zip(kc, kf), start=1):
        if a != b:
            return BPReport(False, n, kc, kf)
    return BPReport(True, None, kc, kf)


# ------------------------------------------------------ spherical integrals

def shifted_dfac(m: int) -> int:
    """(m-1)(m-3)(m-5)..., ending at 2 or 1; equal to 1 for m <= 1."""
    return prod(range(m - 1, 0, -2)) if m > 1 else 1


def trig_integral(p: int, q: int) -> tuple[Fraction, int]:
    """The integral of cos^p sin^q over [0, pi/2] as (coefficient, power of pi/2)."""
    if p < 0 or q < 0:
        raise ValueError("exponents must be nonnegative")
    power = int(p % 2 == 0 and q % 2 == 0)
    return Fraction(shifted_dfac(p) * shifted_dfac(q), shifted_dfac(p + q + 1)), power


def _profile(N: int, profile: Sequence[int]) -> tuple[int, ...]:
    if N < 1 or len(profile) > N or any(x < 0 for x in profile):
        raise ValueError("profile must have at most N nonnegative entries")
    return tuple(profile) + (0,) * (N - len(profile))


def classical_sphere_moment(N: int, profile: Sequence[int]) -> Fraction:
    """The integral of x_1^{l_1} ... x_N^{l_N} over the real sphere in R^N."""
    l = _profile(N, profile)
    if any(x % 2 for x in l):
        return Fraction(0)
    return Fraction(shifted_dfac(N - 1) * prod(shifted_dfac(x) for x in l),
                    shifted_dfac(N + sum(l) - 1))


def sphere_moment_by_coordinates(N: int, profile: Sequence[int]) -> Fraction:
    """The same integral computed as a product of one-dimensional integrals in
    spherical coordinates, normalized by the same product for the constant 1."""
    l = _profile(N, profile)
    if N == 1:
        return Fraction(int(l[0] % 2 == 0))

    def product_over_angles(ls: Sequence[int]) -> tuple[Fraction, int] | None:
        coef, power = Fraction(1), 0
        for a in range(N - 1):
            p = ls[a]
            q = (N - 2 - a) + sum(ls[a + 1:])
            last = a == N - 2
            if p % 2 or (last and q % 2):
                return None
            c, e = trig_integral(p, q)
            coef *= c * (4 if last else 2)
            power += e
        return coef, power

    top = product_over_angles(l)
    if top is None:
        return Fraction(0)
    bottom = product_over_angles((0,) * N)
    if top[1] != bottom[1]:
        raise ArithmeticError("powers of pi do not cancel")
    return top[0] / bottom[0]


def half_classical_sphere_moment(N: int, profile: Sequence[int]) -> Fraction:
    """The integral of |z_1|^{2 l_1} ... |z_N|^{2 l_N} over the complex sphere,
    expanded as real moments on the sphere in R^{2N}."""
    l = _profile(N, profile)
    total = Fraction(0)
    for r in product(*(range(x + 1) for x in l)):
        real_profile = [e for a in range(N) for e in (2 * (l[a] - r[a]), 2 * r[a])]
        total += prod(comb(l[a], r[a]) for a in range(N)) * \
            classical_sphere_moment(2 * N, real_profile)
    return total


def half_classical_closed_constant(N: int, profile: Sequence[int]) -> Fraction:
    """4^{sum l} (2N-1)! prod l_i! / (2N + sum l - 1)!, reported next to the oracle value."""
    l = _profile(N, profile)
    s = sum(l)
    return Fraction(4 ** s * factorial(2 * N - 1) * prod(factorial(x) for x in l),
                    factorial(2 * N + s - 1))


def half_classical_word(profile: Sequence[int]) -> tuple[int, ...]:
    """An index tuple using coordinate a exactly l_a times at odd and at even positions."""
    out: list[int] = []
    for a, x in enumerate(profile, start=1):
        out += [a, a] * x
    return tuple(out)


# ---------------------------------------------------- free hyperspherical

class PrecisionError(ArithmeticError):
    """The interval evaluation could not decide agreement at the requested tolerance."""


@dataclass(frozen=True)
class FreeHypersphericalReport:
    N: int
    l: int
    closed_form: str
    closed_form_interval: tuple[str, str]
    weingarten: Fraction
    difference: str
    ratio: str
    agrees: bool
    precision_bits: int


def _interval_context(prec: int) -> MPIntervalContext:
    ctx = MPIntervalContext()
    ctx.prec = prec
    return ctx


def free_hyperspherical_closed_form(N: int, l: int, prec: int = 128):
    """The q-deformed closed form for the 2l-th moment of a free sphere
    coordinate, q + 1/q = -N, evaluated as an interval at ``prec`` bits."""
    if N < 3 or l < 1:
        raise ValueError("need N >= 3 and l >= 1")
    iv = _interval_context(prec)
    q = (-N + iv.sqrt(iv.mpf(N * N - 4))) / 2
    total = iv.mpf(0)
    for r in range(-l - 1, l + 2):
        if r:
            total += (-1) ** (r % 2) * comb(2 * l + 2, l + r + 1) * r / (1 + q ** r)
    return total * (q + 1) / (q - 1) / (l + 1) / iv.mpf(N + 1) ** l


def _exact_free_moment(N: int, l: int) -> Fraction:
    return integrate_sphere("o+", N, 2 * l, (1,) * (2 * l))


def free_hyperspherical_moment(N: int, l: int, tol: float = 1e-9,
                               max_prec: int = 4096) -> FreeHypersphericalReport:
    """Compare the closed form with the exact Weingarten value of the free sphere."""
    exact = _exact_free_moment(N, l)
    prec = 128
    while prec <= max_prec:
        iv = _interval_context(prec)
        value = free_hyperspherical_closed_form(N, l, prec)
        target = iv.mpf(exact.numerator) / exact.denominator
        diff = value - target
        if abs(diff).b < tol:
            agrees = True
        elif abs(diff).a > tol:
            agrees = False
        else:
            prec *= 2
            continue
        ratio = value / target

        def show(x) -> str:
            return mp.nstr(mp.mpf(x), 20)
        return FreeHypersphericalReport(
            N, l, show(value.mid), (show(value.a), show(value.b)), exact,
            show(diff.mid), show(ratio.mid), agrees, prec)
    raise PrecisionError(f"cannot separate agreement at N={N}, l={l}")


def ratio_interval(N: int, l: int, prec: int = 256):
    """Closed form divided by the exact value, as an interval."""
    exact = _exact_free_moment(N, l)
    iv = _interval_context(prec)
    return free_hyperspherical_closed_form(N, l, prec) / \
        (iv.mpf(exact.numerator) / exact.denominator)
