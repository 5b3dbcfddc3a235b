"""Brute-force Stieltjes sums, independent of the exact integration path.

The oracle reads the raw breakpoint records of the integrator and the raw
pieces of the integrand, converts them to floats and sums over a fine
partition.  It does not use :mod:`stieltjes.measure` or
:func:`stieltjes.integrand.integrate`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .integrand import PiecewiseFn
from .monotone import MonotoneFn

__all__ = ["OracleConfig", "oracle_integrate"]

RULES = ("left", "right", "midpoint")


@dataclass(frozen=True)
class OracleConfig:
    mesh: float = 1e-4
    sample_rule: str = "midpoint"

    def __post_init__(self):
        if not self.mesh > 0:
            raise ValueError("mesh must be positive")
        if self.sample_rule not in RULES:
            raise ValueError(f"sample_rule must be one of {RULES}")


def _limits(F: MonotoneFn, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Left and right limits of ``F`` at sorted points, in floating point."""
    bx = np.array([float(b.x) for b in F.breakpoints])
    bl = np.array([float(b.left) for b in F.breakpoints])
    br = np.array([float(b.right) for b in F.breakpoints])
    i = np.clip(np.searchsorted(bx, pts, side="right") - 1, 0, len(bx) - 2)
    t = (pts - bx[i]) / (bx[i + 1] - bx[i])
    inner = br[i] + (bl[i + 1] - br[i]) * t
    left = inner.copy()
    right = inner.copy()
    j = np.searchsorted(bx, pts)
    hit = (j < len(bx)) & (bx[np.minimum(j, len(bx) - 1)] == pts)
    left[hit] = bl[j[hit]]
    right[hit] = br[j[hit]]
    return left, right


def _piece_values(f: PiecewiseFn, xi: np.ndarray, where: np.ndarray) -> np.ndarray:
    """Evaluate the polynomial of the piece containing ``where`` at ``xi``."""
    knots = np.array([float(k) for k in f.knots])
    idx = np.clip(np.searchsorted(knots, where, side="right") - 1, 0, len(f.polys) - 1)
    coeffs = np.zeros((len(f.polys), 4))
    for k, c in enumerate(f.polys):
        coeffs[k, : len(c)] = [float(a) for a in c]
    c = coeffs[idx]
    return c[:, 0] + xi * (c[:, 1] + xi * (c[:, 2] + xi * c[:, 3]))


def _point_values(f: PiecewiseFn, pts: np.ndarray) -> np.ndarray:
    knots = np.array([float(k) for k in f.knots])
    pv = np.array([float(v) for v in f.point_values])
    out = _piece_values(f, pts, pts)
    j = np.searchsorted(knots, pts)
    hit = (j < len(knots)) & (knots[np.minimum(j, len(knots) - 1)] == pts)
    out[hit] = pv[j[hit]]
    return out


def oracle_integrate(f: PiecewiseFn, F: MonotoneFn, cfg: OracleConfig = OracleConfig()) -> float:
    """Approximate ``int f dF`` by a Stieltjes sum on a partition of mesh ``cfg.mesh``.

    Breakpoints of ``F`` and knots of ``f`` are always partition points.
    Each partition point ``c`` is a singleton cell contributing
    ``f(c) * (F(c+) - F(c-))``; each open cell between partition points
    contributes ``f(xi) * (F(b-) - F(a+))`` with ``xi`` picked by
    ``cfg.sample_rule`` on the polynomial piece covering the cell.
    """
    lo, hi = float(F.lo), float(F.hi)
    if float(f.lo) > lo or float(f.hi) < hi:
        raise ValueError("integrand must be defined on the whole domain of the integrator")
    n = max(1, int(np.ceil((hi - lo) / cfg.mesh)))
    extra = [float(b.x) for b in F.breakpoints]
    extra += [float(k) for k in f.knots if lo < float(k) < hi]
    pts = np.union1d(np.linspace(lo, hi, n + 1), extra)

    left, right = _limits(F, pts)
    # endpoint conventions are already in the stored records
    point_part = _point_values(f, pts) * (right - left)

    a, b = pts[:-1], pts[1:]
    cell_mass = left[1:] - right[:-1]
    if cfg.sample_rule == "left":
        xi = a
    elif cfg.sample_rule == "right":
        xi = b
    else:
        xi = 0.5 * (a + b)
    cell_part = _piece_values(f, xi, 0.5 * (a + b)) * cell_mass
    # fixed ascending summation order
    return float(np.sum(point_part) + np.sum(cell_part))
