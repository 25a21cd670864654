"""Moment dynamics of Hele-Shaw type flows.

Only the first moment column moves in closed form: squeezing decays every
a[j, 0] exponentially at unit rate, injection at the origin advances a[0, 0]
alone.  Exterior moments t_k are contour integrals over the boundary, the
confocal ellipse family realizes the squeeze flow geometrically, and its
common potential is carried by the mother body density on the focal
segment, which also attracts the zeros of the orthogonal polynomials.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, MathDomainError
from .shapes import Annulus, Disk, Ellipse, Shape


def squeeze(col, t: float) -> np.ndarray:
    """First-column flow a[j, 0](t) = e^(-t) a[j, 0](0)."""
    return np.asarray(col, dtype=complex) * math.exp(-t)


def inject(col, dt: float) -> np.ndarray:
    """Source at the origin: a[0, 0] grows by dt, higher moments are fixed."""
    out = np.array(col, dtype=complex)
    if out.size == 0:
        raise InputError("empty moment column")
    new_mass = out[0].real + dt
    if new_mass <= 0:
        raise MathDomainError("suction would empty the domain (a[0,0] <= 0)")
    out[0] = out[0] + dt
    return out


@dataclass
class ExteriorMoments:
    """t[k-1] holds t_k = (1/(2 pi i k)) contour integral of z^-k conj(z) dz."""

    kmax: int
    t: np.ndarray


def _boundary_nodes(shape: Shape, n: int):
    """Boundary parametrization(s) as (points, dz/dtheta) pairs, outer first."""
    th = 2.0 * math.pi * np.arange(n) / n
    if isinstance(shape, Disk):
        z = shape.center + shape.R * np.exp(1j * th)
        dz = 1j * shape.R * np.exp(1j * th)
        return [(z, dz)]
    if isinstance(shape, Ellipse):
        rot = np.exp(1j * shape.phi)
        z = shape.center + rot * (shape.p * np.cos(th) + 1j * shape.q * np.sin(th))
        dz = rot * (-shape.p * np.sin(th) + 1j * shape.q * np.cos(th))
        return [(z, dz)]
    if isinstance(shape, Annulus):
        zo = shape.center + shape.R * np.exp(1j * th)
        zi = shape.center + shape.r * np.exp(1j * th)
        # inner component is traversed clockwise as part of the boundary
        return [(zo, 1j * shape.R * np.exp(1j * th)), (zi, -1j * shape.r * np.exp(1j * th))]
    raise InputError(
        f"no boundary parametrization for {type(shape).__name__}; "
        "exterior moments need a built-in shape"
    )


def exterior_moments(shape: Shape, kmax: int, nodes: int = 1024) -> ExteriorMoments:
    """Exterior harmonic moments t_1..t_kmax by trapezoid contour quadrature.

    Spectrally accurate for these analytic boundaries.  The origin must be
    strictly enclosed by the outer boundary (z^-k blows up on the contour
    otherwise).
    """
    if kmax < 1:
        raise InputError("need kmax >= 1")
    comps = _boundary_nodes(shape, nodes)
    z_outer = comps[0][0]
    if np.abs(z_outer).min() < 1e-12:
        raise MathDomainError("boundary passes through the origin")
    # winding of the outer contour about 0 must be 1
    if abs(np.angle(z_outer / np.roll(z_outer, 1)).sum() - 2 * math.pi) > 1e-6:
        raise MathDomainError("origin is not strictly inside the outer boundary")
    ks = np.arange(1, kmax + 1)
    vals = np.zeros(kmax, dtype=complex)
    for z, dz in comps:
        vals += (z[None, :] ** (-ks[:, None]) * np.conj(z)[None, :] * dz[None, :]).sum(axis=1) / len(z)
    vals /= 1j * ks  # (1/(2 pi i k)) with the trapezoid weight 2 pi / n folded in
    return ExteriorMoments(kmax, vals)


def confocal_ellipse(c: float, s: float) -> Ellipse:
    """Ellipse with foci at +-c and elliptic coordinate s > 0."""
    if c <= 0 or s <= 0:
        raise InputError("need c > 0 and s > 0")
    return Ellipse(0.0 + 0.0j, c * math.cosh(s), c * math.sinh(s))


def mother_body(c: float, mass_total: float, x) -> np.ndarray:
    """Density rho(x) = (2 mass / (pi c^2)) sqrt(c^2 - x^2) on [-c, c].

    The semicircle profile on the focal segment reproduces every exterior
    moment of each confocal ellipse carrying the same mass.
    """
    if c <= 0:
        raise InputError("need c > 0")
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) <= c
    out = np.zeros_like(x)
    out[inside] = (2.0 * mass_total / (math.pi * c * c)) * np.sqrt(c * c - x[inside] ** 2)
    return out


def mother_body_moment(c: float, mass_total: float, j: int, nodes: int = 256) -> float:
    """integral of x^j rho(x) dx over the focal segment (Gauss-Legendre)."""
    xg, wg = np.polynomial.legendre.leggauss(nodes)
    x = c * xg
    w = c * wg
    return float(np.sum(w * x**j * mother_body(c, mass_total, x)))


def zero_attraction(zeros, c: float) -> float:
    """Largest distance from the zeros to the focal segment [-c, c] x {0}."""
    if c <= 0:
        raise InputError("need c > 0")
    zeros = np.asarray(zeros, dtype=complex).ravel()
    if zeros.size == 0:
        return 0.0
    x, y = zeros.real, zeros.imag
    dx = np.maximum(np.abs(x) - c, 0.0)
    return float(np.hypot(dx, y).max())


def squeeze_trajectory(col, t_grid) -> list[tuple[float, int, complex]]:
    """Rows (t, j, a[j, 0](t)) for the squeeze flow on a time grid."""
    col = np.asarray(col, dtype=complex)
    rows = []
    for t in np.asarray(t_grid, dtype=float):
        decayed = squeeze(col, float(t))
        for j, v in enumerate(decayed):
            rows.append((float(t), j, complex(v)))
    return rows


def inject_trajectory(col, t_grid) -> list[tuple[float, int, complex]]:
    """Rows (t, j, a[j, 0](t)) for injection at unit rate from t_grid[0]."""
    col = np.asarray(col, dtype=complex)
    ts = np.asarray(t_grid, dtype=float)
    rows = []
    for t in ts:
        shifted = inject(col, float(t - ts[0])) if t != ts[0] else col
        for j, v in enumerate(shifted):
            rows.append((float(t), j, complex(v)))
    return rows
