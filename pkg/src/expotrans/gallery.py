"""Named example domains and operators, addressable as "gallery:<name>?k=v".

The gallery keeps docs and tests free of JSON boilerplate: every entry is
either a Shape or an operator family whose truncation size is derived from
the requested moment order via the exactness rule.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable
from urllib.parse import parse_qsl

from .errors import InputError
from .exptransform import ExpMoments, a_to_b
from .operators import BandedOperator, b_from_operator, toeplitz_ellipse, toeplitz_power, two_diagonal
from .shapes import Annulus, Disk, Ellipse, Shape, Weighted, moments


@dataclass(frozen=True)
class OperatorFamily:
    """A banded-operator model with the truncation size left open."""

    name: str
    build: Callable[[int], BandedOperator]
    xi_index: int
    max_offset: int

    def sized_for(self, order: int) -> BandedOperator:
        # exactness rule: no Krylov vector may touch the truncation edge
        size = self.xi_index + order * self.max_offset + 2
        return self.build(size)


def _params(query: str, allowed: dict[str, float]) -> dict[str, float]:
    out = dict(allowed)
    for key, val in parse_qsl(query, keep_blank_values=True):
        if key not in allowed:
            raise InputError(f"unknown gallery parameter {key!r}")
        try:
            out[key] = float(val)
        except ValueError as exc:
            raise InputError(f"gallery parameter {key}={val!r} is not a number") from exc
    return out


def resolve(address: str) -> Shape | OperatorFamily:
    """Parse "gallery:<name>?param=value" into a Shape or OperatorFamily."""
    if address.startswith("gallery:"):
        address = address[len("gallery:"):]
    name, _, query = address.partition("?")
    name = name.strip().lower()

    if name == "disk":
        p = _params(query, {"R": 1.0, "x": 0.0, "y": 0.0})
        return Disk(complex(p["x"], p["y"]), p["R"])
    if name == "annulus":
        p = _params(query, {"r": 0.5, "R": 1.0, "x": 0.0, "y": 0.0})
        return Annulus(complex(p["x"], p["y"]), p["r"], p["R"])
    if name == "ellipse-shape":
        p = _params(query, {"p": 1.5, "q": 0.5, "phi": 0.0, "x": 0.0, "y": 0.0})
        return Ellipse(complex(p["x"], p["y"]), p["p"], p["q"], p["phi"])
    if name == "tdisk":
        p = _params(query, {"t": 0.5, "R": 1.0})
        return Weighted(Disk(0j, p["R"]), p["t"])

    if name == "ellipse":
        p = _params(query, {"u": 2.0})
        u = p["u"]
        return OperatorFamily(f"ellipse u={u:g}", lambda size: toeplitz_ellipse(u, size), 0, 1)
    if name == "trifoil":
        _params(query, {})
        return OperatorFamily("trifoil", lambda size: toeplitz_power(1.0, 1.0, 1, size), 1, 2)
    if name == "power":
        p = _params(query, {"alpha": 1.0, "beta": 1.0, "d": 1.0})
        d = int(p["d"])
        if d != p["d"] or d < 1:
            raise InputError("gallery power needs integer d >= 1")
        a, b = p["alpha"], p["beta"]
        return OperatorFamily(
            f"power a={a:g} b={b:g} d={d}",
            lambda size: toeplitz_power(a, b, d, size),
            d,
            d + 1,
        )
    if name == "twodiag":
        p = _params(query, {"A1": 1.0, "B1": 1.0})
        a1, b1 = p["A1"], p["B1"]
        return OperatorFamily(
            f"twodiag A1={a1:g} B1={b1:g}",
            lambda size: two_diagonal(a1, b1, size),
            0,
            2,
        )
    raise InputError(f"unknown gallery entry {name!r}")


def names() -> list[str]:
    return ["disk", "annulus", "ellipse-shape", "tdisk", "ellipse", "trifoil", "power", "twodiag"]


def b_for(address: str, order: int) -> ExpMoments:
    """Moment data b for a gallery entry, by quadrature or by Krylov Gram."""
    entry = resolve(address)
    if isinstance(entry, OperatorFamily):
        return b_from_operator(entry.sized_for(order), order)
    return a_to_b(moments(entry, order))
