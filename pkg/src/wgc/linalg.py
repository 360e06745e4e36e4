"""Exact rational linear algebra on small dense matrices, backed by sympy's DomainMatrix."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

Matrix = list[list[Fraction]]


class SingularMatrixError(ZeroDivisionError):
    """Raised for a singular matrix; ``dependent`` lists column indices of a relation."""

    def __init__(self, message: str, dependent: Sequence[int] = ()):
        super().__init__(message)
        self.dependent = tuple(dependent)


def _is_integral(rows: Sequence[Sequence]) -> bool:
    return all(isinstance(x, int) or Fraction(x).denominator == 1 for r in rows for x in r)


def _domain(rows: Sequence[Sequence]) -> DomainMatrix:
    n, m = len(rows), len(rows[0]) if rows else 0
    if _is_integral(rows):
        return DomainMatrix([[ZZ(int(x)) for x in r] for r in rows], (n, m), ZZ)
    return DomainMatrix([[QQ(Fraction(x).numerator, Fraction(x).denominator) for x in r]
                         for r in rows], (n, m), QQ)


def _to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator)) if hasattr(x, "denominator") \
        else Fraction(int(x))


def _from_den(num: DomainMatrix, den) -> Matrix:
    d = int(den)
    return [[Fraction(int(x), d) for x in row] for row in num.to_list()]


def dependency(rows: Sequence[Sequence]) -> tuple[int, ...]:
    """Column indices carrying a nonzero coefficient in some null vector."""
    null = _domain(rows).to_field().nullspace().to_list()
    if not null:
        return ()
    return tuple(c for c, x in enumerate(null[0]) if x != 0)


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return _domain(rows).rank()


def independent_columns(rows: Sequence[Sequence]) -> tuple[int, ...]:
    """Pivot columns of the reduced row echelon form: a maximal independent set."""
    if not rows:
        return ()
    _, _, pivots = _domain(rows).rref_den()
    return tuple(pivots)


def inverse(rows: Sequence[Sequence]) -> Matrix:
    n = len(rows)
    if n == 0:
        return []
    M = _domain(rows)
    try:
        if M.domain == ZZ:
            num, den = M.inv_den()
            return _from_den(num, den)
        return [[_to_fraction(x) for x in row] for row in M.inv().to_list()]
    except DMNonInvertibleMatrixError:
        raise SingularMatrixError("matrix is singular", dependency(rows)) from None


def solve(rows: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """The unique x with A x = b."""
    n = len(rows)
    if n == 0:
        return []
    A = _domain(rows)
    rhs = _domain([[x] for x in b])
    try:
        if A.domain == ZZ and rhs.domain == ZZ:
            num, den = A.solve_den(rhs)
            return [row[0] for row in _from_den(num, den)]
        x = A.to_field().lu_solve(rhs.to_field())
        return [_to_fraction(row[0]) for row in x.to_list()]
    except (DMNonInvertibleMatrixError, ZeroDivisionError):
        raise SingularMatrixError("matrix is singular", dependency(rows)) from None


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    if not a or not b:
        return [[] for _ in a]
    A, B = _domain(a), _domain(b)
    if A.domain != B.domain:
        A, B = A.convert_to(QQ), B.convert_to(QQ)
    return [[_to_fraction(x) for x in row] for row in (A * B).to_list()]
