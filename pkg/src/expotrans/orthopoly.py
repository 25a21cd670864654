"""Orthonormal polynomials of the b inner product and their Hessenberg matrix.

The inner product on polynomials is <z^m, z^n> = b[n, m].  Orthonormalizing
the monomials with a pivoted Cholesky factorization yields polynomials P_k
with positive leading coefficients gamma_k; a vanishing pivot stops the
process, which is the degree-D signature of a quadrature domain (the span
of the monomials degenerates there).  Multiplication by z compresses to a
lower Hessenberg matrix h[j, k] = <z P_k, P_j> whose structure encodes the
finite term relations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, MathDomainError

PIVOT_TOL = 1e-10


@dataclass
class PolyBasis:
    """Rows of ``coeffs`` hold monomial coefficients of P_0 .. P_{D-1}."""

    degree: int
    coeffs: np.ndarray
    order: int
    stopped: bool

    @property
    def gamma(self) -> np.ndarray:
        """Leading coefficients; positive by construction."""
        return np.real(np.diag(self.coeffs))


@dataclass
class Hessenberg:
    h: np.ndarray
    certified: int


@dataclass
class CompletenessReport:
    lhs: float
    rhs: float
    gap: float
    tail: float
    bound: float
    verdict: str


def _b_matrix(b) -> np.ndarray:
    if hasattr(b, "b"):
        b = b.b
    m = np.asarray(b, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError("expected a square b matrix")
    return m


def orthonormalize(b, pivot_tol: float = PIVOT_TOL) -> PolyBasis:
    """Gram-Schmidt on monomials under the b inner product, with pivot stop.

    Stops at the first relative pivot below ``pivot_tol`` and returns the
    polynomials found so far; raises if the matrix is indefinite beyond
    tolerance.
    """
    bm = _b_matrix(b)
    n = bm.shape[0]
    gram = bm.conj()  # gram[m, n] = <z^m, z^n> = b[n, m]
    b00 = gram[0, 0].real
    norm = float(np.linalg.norm(bm, 2))
    if b00 <= 0:
        if b00 < -1e-9 * max(norm, 1e-30):
            raise MathDomainError("b matrix is indefinite beyond tolerance")
        # nothing to normalize against: the degenerate degree-0 basis
        return PolyBasis(0, np.zeros((0, 0), dtype=complex), n, True)
    chol = np.zeros((n, n), dtype=complex)
    degree = n
    stopped = False
    for k in range(n):
        pivot = gram[k, k].real - float(np.sum(np.abs(chol[k, :k]) ** 2))
        if pivot <= pivot_tol * b00:
            if pivot < -1e-9 * max(norm, 1e-30):
                raise MathDomainError("b matrix is indefinite beyond tolerance")
            degree = k
            stopped = True
            break
        chol[k, k] = math.sqrt(pivot)
        if k + 1 < n:
            rest = gram[k + 1 :, k] - chol[k + 1 :, :k] @ chol[k, :k].conj()
            chol[k + 1 :, k] = rest / chol[k, k]
    c = chol[:degree, :degree]
    coeffs = np.linalg.solve(c, np.eye(degree, dtype=complex)) if degree else np.zeros((0, 0), complex)
    return PolyBasis(degree, coeffs, n, stopped)


def hessenberg(b, basis: PolyBasis) -> Hessenberg:
    """h[j, k] = <z P_k, P_j>.

    Needs the shifted columns b[:, m+1]; when the basis runs to the full
    order the last column of h is truncation affected, so the certified
    block is one smaller.  Entries below the first subdiagonal are exact
    structural zeros (never computed).
    """
    bm = _b_matrix(b)
    n = bm.shape[0]
    d = basis.degree
    if d < 1:
        return Hessenberg(np.zeros((0, 0), dtype=complex), 0)
    lmat = basis.coeffs
    certified = d if d < n else n - 1
    shifted = np.zeros((d, d), dtype=complex)  # shifted[m, nn] = b[nn, m+1]
    for m in range(d):
        if m + 1 < n:
            shifted[m] = bm[:d, m + 1]
    h = np.zeros((d, d), dtype=complex)
    for k in range(d):
        y = lmat[k, : k + 1] @ shifted[: k + 1]  # y[nn] = sum_m L[k,m] b[nn, m+1]
        top = min(k + 2, d)
        h[:top, k] = lmat[:top].conj() @ y
    return Hessenberg(h, certified)


def completeness_gap(h: Hessenberg, b00: float) -> CompletenessReport:
    """Test the trace identity sum_k |h_0k|^2 - |h_10|^2 = b00.

    Equality characterizes completeness of the polynomial model; the left
    side can only fall short, so a positive gap beyond the truncation bound
    reads as incomplete.  A verdict is issued only when the last included
    term is negligible against the accumulated sum.
    """
    k = h.certified
    if k < 1:
        return CompletenessReport(math.nan, b00, math.nan, math.nan, math.nan, "inconclusive")
    terms = np.abs(h.h[0, 1:k]) ** 2
    h10sq = float(abs(h.h[1, 0]) ** 2) if h.h.shape[0] > 1 else 0.0
    lhs = float(terms.sum()) - h10sq
    gap = b00 - lhs
    tail = float(terms[-1]) if terms.size else 0.0
    bound = 10.0 * tail + 1e-9 * max(1.0, abs(b00), abs(lhs))
    settled = tail <= 1e-3 * max(abs(lhs), abs(b00))
    if not settled:
        verdict = "inconclusive"
    elif gap > bound:
        verdict = "incomplete"
    elif abs(gap) <= bound:
        verdict = "consistent-with-complete"
    else:
        verdict = "inconclusive"
    return CompletenessReport(lhs, float(b00), gap, tail, bound, verdict)


def subdiag_check(basis: PolyBasis, h: Hessenberg) -> float:
    """Max deviation of h[k+1, k] from gamma_k / gamma_{k+1} on the certified block."""
    gamma = basis.gamma
    worst = 0.0
    for k in range(min(h.certified, basis.degree - 1)):
        worst = max(worst, abs(h.h[k + 1, k] - gamma[k] / gamma[k + 1]))
    return worst


def poly_zeros(basis: PolyBasis, n: int) -> np.ndarray:
    """Zeros of P_n via the companion matrix of P_n / gamma_n."""
    if not 0 <= n < basis.degree:
        raise InputError(f"polynomial index {n} outside basis degree {basis.degree}")
    if n == 0:
        return np.zeros(0, dtype=complex)
    monic = basis.coeffs[n, :n] / basis.coeffs[n, n]
    comp = np.eye(n, k=-1, dtype=complex)
    comp[:, -1] = -monic
    return np.linalg.eigvals(comp)
