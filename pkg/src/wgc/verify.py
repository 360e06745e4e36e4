"""The acceptance suite: ten end-to-end checks, each run along independent routes."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb
from typing import Callable

from mpmath import mp

from .categories import CategoryId, EasyGroupId, FAMILIES, LIBERATIONS
from .laws import (
    CumulantSeq, bp_check, classical_sphere_moment, cumulants_to_moments,
    free_hyperspherical_moment, law_moments, moments_to_cumulants, ratio_interval,
    sphere_moment_by_coordinates,
)
from .partitions import (
    Partition, block_count_join, crossing_count, enumerate_partitions, shrink, signature,
    twisted_delta,
)
from .weingarten import (
    AffineSpaceSpec, HomSpaceSpec, SingularGramError, bp_regime_limit, char_moment,
    char_moment_limit, chi_E_moment, gram, hypergeometric_equality, integrate,
    integrate_affine, integrate_homspace, integrate_sphere,
)


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    seconds: float = 0.0
    budget: float = 0.0
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"criterion": self.criterion, "name": self.name, "passed": self.passed,
                "seconds": round(self.seconds, 3), "budget_seconds": self.budget,
                "details": self.details}


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def _with_fallback(fn: Callable[..., Fraction], *args, **kwargs) -> Fraction:
    """Strict evaluation, falling back to the generalized inverse on a singular Gram matrix."""
    try:
        return fn(*args, **kwargs)
    except SingularGramError:
        return fn(*args, **kwargs, mode="pseudo")


def _index_classes(k: int, N: int) -> list[tuple[int, ...]]:
    """One index tuple per kernel with at most N blocks."""
    return [tuple(b + 1 for b in p.labels) for p in enumerate_partitions(k)
            if p.n_blocks <= N]


def switch_sign(seq: list) -> int:
    """Sign of the number of adjacent switches of legs from different blocks needed
    to bring the blocks together in order of first appearance."""
    rank: dict = {}
    for b in seq:
        rank.setdefault(b, len(rank))
    keys = [rank[b] for b in seq]
    swaps = 0
    for end in range(len(keys) - 1, 0, -1):
        for a in range(end):
            if keys[a] > keys[a + 1]:
                keys[a], keys[a + 1] = keys[a + 1], keys[a]
                swaps += 1
    return -1 if swaps % 2 else 1


# ------------------------------------------------------------------ checks

def check_enumeration() -> CheckResult:
    got = {
        "NC2(2k)": [len(enumerate_partitions(2 * k, "noncrossing-pairings")) for k in range(1, 6)],
        "P2(2k)": [len(enumerate_partitions(2 * k, "pairings")) for k in range(1, 6)],
        "P(4)": len(enumerate_partitions(4, "all")),
        "NC(4)": len(enumerate_partitions(4, "noncrossing")),
        "Peven(6)": len(enumerate_partitions(6, "even")),
        "NCeven(6)": len(enumerate_partitions(6, "noncrossing-even")),
    }
    expected = {"NC2(2k)": [1, 2, 5, 14, 42], "P2(2k)": [1, 3, 15, 105, 945], "P(4)": 15,
                "NC(4)": 14, "Peven(6)": 31, "NCeven(6)": 12}
    bad = {k: {"expected": expected[k], "actual": got[k]} for k in expected
           if got[k] != expected[k]}
    return CheckResult(1, "enumeration counts", not bad, budget=1, details=bad or got)


def check_classical_sphere() -> CheckResult:
    mismatches = []
    for N in range(2, 7):
        for k in range(1, 9):
            weingarten_value = _with_fallback(integrate_sphere, "o", N, k, (1,) * k)
            closed = classical_sphere_moment(N, (k,))
            angles = sphere_moment_by_coordinates(N, (k,))
            if not weingarten_value == closed == angles:
                mismatches.append({"N": N, "k": k, "weingarten": str(weingarten_value),
                                   "closed_form": str(closed), "coordinates": str(angles)})
        if classical_sphere_moment(N, (4,)) != Fraction(3, N * (N + 2)):
            mismatches.append({"N": N, "k": 4, "expected": str(Fraction(3, N * (N + 2)))})
    return CheckResult(2, "classical sphere moments", not mismatches, budget=5,
                       details={"mismatches": mismatches, "N": "2..6", "exponents": "1..8"})


def check_free_sphere() -> CheckResult:
    bad = []
    for N in range(2, 9):
        value = integrate_sphere("o+", N, 4, (1,) * 4)
        if value != Fraction(2, N * (N + 1)):
            bad.append({"N": N, "actual": str(value), "expected": str(Fraction(2, N * (N + 1)))})
    rescaled = {}
    for k in range(1, 5):
        column = [Fraction(N) ** k * integrate_sphere("o+", N, 2 * k, (1,) * (2 * k))
                  for N in range(2, 9)]
        gaps = [abs(v - catalan(k)) for v in column]
        rescaled[k] = [str(v) for v in column]
        if any(b > a for a, b in zip(gaps, gaps[1:])) or any(v > catalan(k) for v in column):
            bad.append({"k": k, "rescaled": rescaled[k], "target": catalan(k)})
    return CheckResult(3, "free sphere moments", not bad, budget=5,
                       details={"failures": bad, "rescaled_N=2..8": rescaled})


def check_free_hyperspherical(Ns=range(3, 8), ls=range(1, 6)) -> CheckResult:
    reports = [free_hyperspherical_moment(N, l) for N in Ns for l in ls]
    agree = all(r.agrees for r in reports)
    ratios = {(r.N, r.l): ratio_interval(r.N, r.l) for r in reports}
    first = next(iter(ratios.values()))
    constant = all(abs(x.mid - first.mid) < 1e-9 for x in ratios.values())
    # Diagnostic only: does the ratio follow ((N+2)/(N+1))^l?
    pattern = all(abs(x.mid - mp.mpf(N + 2) ** l / mp.mpf(N + 1) ** l) < 1e-9
                  for (N, l), x in ratios.items())
    details = {
        "agree_within_1e-9": agree,
        "constant_ratio": constant,
        "ratio_equals_((N+2)/(N+1))^l": pattern,
        "rows": [{"N": r.N, "l": r.l, "closed_form": r.closed_form,
                  "weingarten": str(r.weingarten), "difference": r.difference,
                  "ratio": r.ratio} for r in reports],
    }
    return CheckResult(4, "free hyperspherical closed form", agree or constant, budget=10,
                       details=details)


def check_truncated_characters(max_k: int = 8) -> CheckResult:
    bad = []
    for k in range(1, max_k + 1):
        N = max(k, 2)
        for group, kind in (("o", "pairings"), ("o+", "noncrossing-pairings")):
            value = char_moment(group, N, k, N)
            count = len(enumerate_partitions(k, kind))
            if value != count:
                bad.append({"group": group, "k": k, "N": N, "actual": str(value),
                            "expected": count})
    pairs = (("o", "gaussian"), ("o+", "semicircle"), ("h", "bessel"), ("h+", "free-bessel"))
    for t in (Fraction(1), Fraction(1, 2)):
        for group, law in pairs:
            moments = law_moments(f"{law}:t={t}", max_k)
            for k in range(max_k + 1):
                limit = char_moment_limit(group, t, k)
                if limit != moments[k]:
                    bad.append({"group": group, "law": law, "t": str(t), "k": k,
                                "limit": str(limit), "law_moment": str(moments[k])})
    return CheckResult(5, "truncated characters", not bad, budget=5, details={"failures": bad})


def check_cumulants(max_k: int = 8, samples: int = 100, seed: int = 20240601) -> CheckResult:
    rng = random.Random(seed)
    bad = []
    for n in range(samples):
        M = [Fraction(1)] + [Fraction(rng.randint(-50, 50), rng.randint(1, 20))
                             for _ in range(10)]
        for kind in ("classical", "free"):
            c = moments_to_cumulants(M, kind)
            back = cumulants_to_moments(CumulantSeq(c.values, kind))
            if list(back.values) != M:
                bad.append({"sample": n, "kind": kind})
    reports = {}
    for classical, free in (("gaussian", "semicircle"), ("poisson", "free-poisson"),
                            ("bessel", "free-bessel")):
        for t in ("1", "1/2"):
            r = bp_check(f"{classical}:t={t}", f"{free}:t={t}", max_k)
            reports[f"{classical}/{free}:t={t}"] = r.ok
            if not r:
                bad.append({"pair": f"{classical}/{free}", "t": t,
                            "first_discrepancy": r.first_discrepancy})
    return CheckResult(6, "moment-cumulant transforms", not bad, budget=5,
                       details={"failures": bad, "bercovici_pata": reports})


def _twisted_gram_matches(k: int, N: int) -> bool:
    D = enumerate_partitions(k, "pairings")
    G = gram(CategoryId("P2"), k, N)
    indices = list(product(range(1, N + 1), repeat=k))
    for a, p in enumerate(D):
        row = [twisted_delta(p, i) for i in indices]
        for b, q in enumerate(D):
            total = sum(x * twisted_delta(q, i) for x, i in zip(row, indices) if x)
            if total != G.entries[a][b]:
                return False
    return True


def check_twisting() -> CheckResult:
    bad = []
    checked = 0
    for n in range(0, 9, 2):
        for flat in enumerate_partitions(n, "even"):
            for upper in range(n + 1):
                tau = Partition.from_labels(flat.labels, upper)
                checked += 1
                sign = signature(tau)
                if sign != switch_sign([tau.labels[q] for q in tau.clockwise()]):
                    bad.append({"partition": str(tau), "signature": sign})
                if tau.is_pairing and sign != (-1) ** crossing_count(tau):
                    bad.append({"partition": str(tau), "crossings": crossing_count(tau)})
    gram_ok = all(_twisted_gram_matches(k, N) for k in (2, 4) for N in (2, 3))
    if not gram_ok:
        bad.append({"twisted_gram": "differs from the untwisted Gram matrix"})
    for k in range(1, 5):
        for N in range(1, 7):
            word = (0,) * (2 * k)
            one = (1,) * (2 * k)
            plain = _with_fallback(integrate, "o", N, word, one, one)
            twisted = _with_fallback(integrate, "o", N, word, one, one, twist=True)
            if plain != twisted:
                bad.append({"k": k, "N": N, "plain": str(plain), "twisted": str(twisted)})
    return CheckResult(7, "twisting", not bad, budget=10,
                       details={"failures": bad, "even_partitions_checked": checked})


def check_fattening() -> CheckResult:
    bad = []
    for k in range(1, 7):
        D = enumerate_partitions(2 * k, "noncrossing-pairings")
        shrunk = [shrink(p) for p in D]
        sizes = [p.n_blocks for p in shrunk]
        for a, p in enumerate(D):
            for b, q in enumerate(D):
                rhs = k + 2 * block_count_join(shrunk[a], shrunk[b]) - sizes[a] - sizes[b]
                if block_count_join(p, q) != rhs:
                    bad.append({"k": k, "pi": str(p), "sigma": str(q)})
    sides = {}
    for n in range(2, 5):
        for k in range(0, 6):
            lhs, rhs = hypergeometric_equality(n, k)
            sides[f"n={n},k={k}"] = str(lhs)
            if lhs != rhs:
                bad.append({"n": n, "k": k, "lhs": str(lhs), "rhs": str(rhs)})
    return CheckResult(8, "fattening and hypergeometric laws", not bad, budget=30,
                       details={"failures": bad, "values": sides})


def check_homogeneous_spaces() -> CheckResult:
    bad = []
    N = 3
    for s in range(1, 5):
        word = (0,) * s
        idx = list(product(range(1, N + 1), repeat=s))
        for i in idx:
            for j in idx:
                group_value = integrate("o", N, word, i, j)
                space_value = integrate_homspace(HomSpaceSpec("o", N, N, N, word, i, j))
                if group_value != space_value:
                    bad.append({"reduction": "L=M=N", "i": i, "j": j})
            sphere = integrate_sphere("o", N, word, i)
            row = integrate_homspace(HomSpaceSpec("o", 1, N, 1, word, (1,) * s, i),
                                     mode="pseudo")
            if sphere != row:
                bad.append({"reduction": "L=M=1", "j": i, "sphere": str(sphere),
                            "space": str(row)})
    limits = {"o": bp_regime_limit("o", 1, 1, 1, 4), "o+": bp_regime_limit("o+", 1, 1, 1, 4)}
    if limits != {"o": 3, "o+": 2}:
        bad.append({"limits": {k: str(v) for k, v in limits.items()}})
    approach = {}
    for group in ("o", "o+"):
        for label, (kappa, lam) in (("1,1,1", (1, 1)), ("1/2,1/2,1", (Fraction(1, 2),) * 2)):
            target = bp_regime_limit(group, kappa, lam, 1, 4)
            values = [chi_E_moment(group, n, n, int(lam * n), int(kappa * n), 4)
                      for n in (4, 6, 8)]
            gaps = [abs(v - target) for v in values]
            approach[f"{group} kappa,lambda,mu={label}"] = [str(v) for v in values]
            if any(b > a for a, b in zip(gaps, gaps[1:])):
                bad.append({"group": group, "regime": label, "values": [str(v) for v in values],
                            "target": str(target)})
    return CheckResult(9, "homogeneous spaces", not bad, budget=10,
                       details={"failures": bad, "chi_E_moments_n=4,6,8": approach})


def _easy_groups() -> list[EasyGroupId]:
    out = []
    for family in FAMILIES:
        for liberation in LIBERATIONS:
            try:
                out.append(EasyGroupId(family, liberation))
            except ValueError:
                pass
    return out


def check_affine() -> CheckResult:
    bad = []
    count = 0
    for g in _easy_groups():
        unitary = g.family in ("U", "K")
        for k in range(0, 5):
            words = list(product((0, 1), repeat=k)) if unitary else [(0,) * k]
            for N in range(1, 6):
                for word in words:
                    for i in _index_classes(k, N):
                        sphere = _with_fallback(integrate_sphere, g, N, word, i)
                        affine = _with_fallback(integrate_affine,
                                                AffineSpaceSpec(g, N, {1}, word, i))
                        count += 1
                        if affine.exact != sphere:
                            bad.append({"group": str(g), "N": N, "word": word, "i": i,
                                        "sphere": str(sphere), "affine": str(affine)})
    return CheckResult(10, "affine spaces at I={1}", not bad, budget=5,
                       details={"failures": bad[:20], "cases": count})


CHECKS: dict[int, Callable[[], CheckResult]] = {
    1: check_enumeration,
    2: check_classical_sphere,
    3: check_free_sphere,
    4: check_free_hyperspherical,
    5: check_truncated_characters,
    6: check_cumulants,
    7: check_twisting,
    8: check_fattening,
    9: check_homogeneous_spaces,
    10: check_affine,
}

SUITES = {
    "core": (1, 2, 3, 7, 8, 9, 10),
    "laws": (5, 6),
    "hyperspherical": (4,),
    "all": tuple(CHECKS),
}


def run_check(number: int, **kwargs) -> CheckResult:
    start = time.perf_counter()
    result = CHECKS[number](**kwargs)
    result.seconds = time.perf_counter() - start
    return result


def run_suite(name: str, **kwargs) -> list[CheckResult]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    out = []
    for number in SUITES[name]:
        extra = {}
        if number in (5, 6) and "max_k" in kwargs:
            extra["max_k"] = kwargs["max_k"]
        if number == 4:
            extra = {key: kwargs[key] for key in ("Ns", "ls") if key in kwargs}
        out.append(run_check(number, **extra))
    return out
