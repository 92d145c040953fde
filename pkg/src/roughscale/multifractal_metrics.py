"""Multifractality-strength measures read off a generalized Hurst curve."""
from __future__ import annotations

from dataclasses import dataclass

from .mfdfa import GHECurve


@dataclass(frozen=True)
class MultifractalStrength:
    k: float
    delta_h: float  # h(-k) - h(k); 0 for a monofractal curve
    b1: float       # linear Taylor slope of h(q) near q = 0
    b0: float       # symmetric intercept estimate


def delta_h(curve: GHECurve, k: float) -> float:
    """Width h(-k) - h(k); requires both q = -k and q = +k on the grid.

    No interpolation: a missing q raises so configuration mismatches stay
    visible.
    """
    return curve.h_at(-k) - curve.h_at(k)


def taylor_b1(curve: GHECurve, k: float = 3.0) -> tuple[float, float]:
    """(b0, b1) of the linear approximation h(q) = b0 + b1*q around q = 0.

    b1 = -delta_h(k)/(2k) (the symmetric finite difference over [-k, k]) and
    b0 = (h(-k) + h(k))/2, its matching intercept.
    """
    h_minus = curve.h_at(-k)
    h_plus = curve.h_at(k)
    b1 = -(h_minus - h_plus) / (2.0 * k)
    b0 = (h_minus + h_plus) / 2.0
    return b0, b1


def strength(curve: GHECurve, k: float = 3.0) -> MultifractalStrength:
    b0, b1 = taylor_b1(curve, k)
    return MultifractalStrength(k=k, delta_h=delta_h(curve, k), b1=b1, b0=b0)
