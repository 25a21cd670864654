"""Truncated double power series in u = 1/z and v = 1/conj(w).

A series is stored as a constant term plus an ``order x order`` tail whose
entry ``tail[j, k]`` multiplies u**(j+1) * v**(k+1).  Every operation
truncates at total degree ``order`` in each variable separately, and the
grading (each tail monomial carries at least one u and one v) makes the
exponential and logarithm finite triangular recursions rather than limits.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError


@dataclass
class BiSeries:
    """c + sum_{j,k < order} tail[j,k] u^(j+1) v^(k+1)."""

    order: int
    const: complex
    tail: np.ndarray

    def __post_init__(self):
        self.tail = np.asarray(self.tail, dtype=complex)
        if self.order < 1:
            raise InputError("series order must be >= 1")
        if self.tail.shape != (self.order, self.order):
            raise InputError(
                f"tail shape {self.tail.shape} does not match order {self.order}"
            )
        if not np.all(np.isfinite(self.tail.view(float))):
            raise InputError("series tail contains non-finite entries")

    @classmethod
    def zero(cls, order: int) -> "BiSeries":
        return cls(order, 0.0, np.zeros((order, order), dtype=complex))

    @classmethod
    def one(cls, order: int) -> "BiSeries":
        return cls(order, 1.0, np.zeros((order, order), dtype=complex))

    @classmethod
    def from_tail(cls, tail, const: complex = 0.0) -> "BiSeries":
        tail = np.asarray(tail, dtype=complex)
        return cls(tail.shape[0], const, tail.copy())

    def copy(self) -> "BiSeries":
        return BiSeries(self.order, self.const, self.tail.copy())

    def __mul__(self, other):
        if isinstance(other, BiSeries):
            return mul(self, other)
        return NotImplemented


def _check_same_order(f: BiSeries, g: BiSeries):
    if f.order != g.order:
        raise InputError(f"order mismatch: {f.order} vs {g.order}")


def mul(f: BiSeries, g: BiSeries) -> BiSeries:
    """Product, truncated to the common order."""
    _check_same_order(f, g)
    n = f.order
    tail = f.const * g.tail + g.const * f.tail
    # tail*tail products land at u,v exponents >= 2, i.e. shifted one slot
    for j in range(n - 1):
        for k in range(n - 1):
            c = f.tail[j, k]
            if c != 0.0:
                tail[j + 1 :, k + 1 :] += c * g.tail[: n - 1 - j, : n - 1 - k]
    return BiSeries(n, f.const * g.const, tail)


def _du_cross(rows_a: np.ndarray, rows_e: np.ndarray, j: int, n: int) -> np.ndarray:
    # S[k] = sum_{p<j} (p+1) * sum_{q<k} a[p,q] e[j-1-p, k-1-q], the coefficient
    # of u^j v^(k+1) in (dA/du) * tail(E).
    s = np.zeros(n, dtype=complex)
    for p in range(j):
        s[1:] += (p + 1) * np.convolve(rows_a[p], rows_e[j - 1 - p])[: n - 1]
    return s


def exp_neg(f: BiSeries) -> BiSeries:
    """exp(-f) for a series with zero constant term.

    Uses the derivative identity E_u = -f_u * E, which determines each tail
    row of E from earlier rows in one triangular pass.  The v^1 column of
    the result is exactly -f's v^1 column (the cross terms are empty there).
    """
    if f.const != 0.0:
        raise InputError("exp_neg expects a series with zero constant term")
    n = f.order
    a = f.tail
    e = np.zeros((n, n), dtype=complex)
    for j in range(n):
        e[j] = -a[j] - _du_cross(a, e, j, n) / (j + 1)
    return BiSeries(n, 1.0, e)


def log_neg(f: BiSeries) -> BiSeries:
    """-log(f) for a series with constant term 1.  Inverse of exp_neg."""
    if f.const != 1.0:
        raise InputError("log_neg expects a series with constant term 1")
    n = f.order
    e = f.tail
    a = np.zeros((n, n), dtype=complex)
    for j in range(n):
        # same identity as exp_neg, solved for the new row of a
        a[j] = -e[j] - _du_cross(a, e, j, n) / (j + 1)
    return BiSeries(n, 0.0, a)


def v1_column(f: BiSeries) -> np.ndarray:
    """Coefficients of v^1: entry m multiplies u^(m+1) v."""
    return f.tail[:, 0].copy()
