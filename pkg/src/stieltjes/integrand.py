"""Bounded piecewise-polynomial integrands and their exact integrals."""

from __future__ import annotations

from bisect import bisect_right
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from .measure import LSMeasure
from .monotone import CompositionError, DomainError, MonotoneFn, exact

__all__ = ["MAX_DEGREE", "PiecewiseFn", "compose_with_monotone", "integrate"]

MAX_DEGREE = 3

Poly = tuple[Fraction, ...]


def _poly(coeffs) -> Poly:
    c = [exact(v) for v in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    if not c:
        c = [Fraction(0)]
    if len(c) - 1 > MAX_DEGREE:
        raise ValueError(f"polynomial degree {len(c) - 1} exceeds {MAX_DEGREE}")
    return tuple(c)


def _peval(c: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for a in reversed(c):
        acc = acc * x + a
    return acc


def _antiderivative(c: Poly) -> Poly:
    return (Fraction(0),) + tuple(a / (k + 1) for k, a in enumerate(c))


def _derivative(c: Poly) -> Poly:
    return tuple(k * a for k, a in enumerate(c))[1:] or (Fraction(0),)


def _compose_linear(c: Poly, alpha: Fraction, beta: Fraction) -> Poly:
    """Coefficients of ``p(alpha + beta * y)`` in powers of ``y``."""
    out = [Fraction(0)] * len(c)
    for k, a in enumerate(c):
        if a == 0:
            continue
        for j in range(k + 1):
            out[j] += a * comb(k, j) * alpha ** (k - j) * beta**j
    return _poly(out)


def _nonneg_on(c: Poly, a: Fraction, b: Fraction) -> bool:
    """Is the polynomial (degree <= 2) nonnegative on ``[a, b]``?"""
    pts = [a, b]
    if len(c) == 3 and c[2] != 0:
        v = -c[1] / (2 * c[2])
        if a < v < b:
            pts.append(v)
    return all(_peval(c, p) >= 0 for p in pts)


class PiecewiseFn:
    """Piecewise polynomial on ``[lo, hi]`` with explicit values at the knots.

    ``knots`` are strictly increasing with ``knots[0] = lo`` and
    ``knots[-1] = hi``; ``polys[i]`` holds the coefficients (constant term
    first) on the open interval ``(knots[i], knots[i + 1])``; ``point_values[i]``
    is the value at ``knots[i]`` itself.
    """

    __slots__ = ("knots", "polys", "point_values")

    def __init__(self, knots, polys, point_values):
        self.knots = tuple(exact(k) for k in knots)
        self.polys = tuple(_poly(c) for c in polys)
        self.point_values = tuple(exact(v) for v in point_values)
        if len(self.knots) < 2:
            raise ValueError("need lo < hi")
        if any(a >= b for a, b in zip(self.knots, self.knots[1:])):
            raise ValueError("knots must be strictly increasing")
        if len(self.polys) != len(self.knots) - 1:
            raise ValueError("need one polynomial per gap between knots")
        if len(self.point_values) != len(self.knots):
            raise ValueError("need one point value per knot")

    @classmethod
    def polynomial(cls, coeffs, lo, hi) -> PiecewiseFn:
        c = _poly(coeffs)
        lo, hi = exact(lo), exact(hi)
        return cls([lo, hi], [c], [_peval(c, lo), _peval(c, hi)])

    @classmethod
    def identity(cls, lo, hi) -> PiecewiseFn:
        return cls.polynomial([0, 1], lo, hi)

    @classmethod
    def constant(cls, k, lo, hi) -> PiecewiseFn:
        return cls.polynomial([k], lo, hi)

    @classmethod
    def from_pieces(cls, pieces: Sequence, point_values: Mapping) -> PiecewiseFn:
        """Build from ``[(a, b, coeffs), ...]`` and ``{knot: value}``.

        Every piece boundary needs an entry in ``point_values``.
        """
        pieces = [(exact(a), exact(b), c) for a, b, c in pieces]
        for (_, b0, _), (a1, _, _) in zip(pieces, pieces[1:]):
            if b0 != a1:
                raise ValueError(f"pieces do not abut: gap or overlap at {b0} / {a1}")
        knots = [pieces[0][0]] + [b for _, b, _ in pieces]
        pv = {exact(k): v for k, v in point_values.items()}
        missing = [k for k in knots if k not in pv]
        if missing:
            raise ValueError(f"missing point values at {[float(m) for m in missing]}")
        return cls(knots, [c for _, _, c in pieces], [pv[k] for k in knots])

    @property
    def lo(self) -> Fraction:
        return self.knots[0]

    @property
    def hi(self) -> Fraction:
        return self.knots[-1]

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self.knots[0], self.knots[-1]

    @property
    def degree(self) -> int:
        return max(len(c) - 1 for c in self.polys)

    def __repr__(self):
        return f"PiecewiseFn(knots={[float(k) for k in self.knots]}, polys={len(self.polys)})"

    def _locate(self, x: Fraction) -> tuple[int, bool]:
        if not self.lo <= x <= self.hi:
            raise DomainError(f"x={x} outside [{self.lo}, {self.hi}]")
        i = bisect_right(self.knots, x) - 1
        return i, self.knots[i] == x

    def __call__(self, x) -> Fraction:
        x = exact(x)
        i, at_knot = self._locate(x)
        if at_knot:
            return self.point_values[i]
        return _peval(self.polys[i], x)

    def limit(self, x, side: str) -> Fraction:
        """One-sided limit; at ``lo``/``hi`` the missing side gives the value."""
        x = exact(x)
        i, at_knot = self._locate(x)
        if not at_knot:
            return _peval(self.polys[i], x)
        if side == "left":
            return self.point_values[i] if i == 0 else _peval(self.polys[i - 1], x)
        if side == "right":
            return self.point_values[i] if i == len(self.polys) else _peval(self.polys[i], x)
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")

    def is_continuous(self) -> bool:
        return all(
            self.limit(k, "left") == v == self.limit(k, "right")
            for k, v in zip(self.knots, self.point_values)
        )

    def is_increasing(self) -> bool:
        for (a, b), c in zip(zip(self.knots, self.knots[1:]), self.polys):
            if not _nonneg_on(_derivative(c), a, b):
                return False
        return all(
            self.limit(k, "left") <= v <= self.limit(k, "right")
            for k, v in zip(self.knots, self.point_values)
        )

    def is_decreasing(self) -> bool:
        return (-self).is_increasing()

    # -- pointwise algebra ----------------------------------------------

    def _combine(self, other: PiecewiseFn, sign: int) -> PiecewiseFn:
        if self.domain != other.domain:
            raise DomainError("pointwise operations need identical domains")
        knots = sorted(set(self.knots) | set(other.knots))
        polys = []
        for a, b in zip(knots, knots[1:]):
            m = (a + b) / 2
            p = self.polys[self._locate(m)[0]]
            q = other.polys[other._locate(m)[0]]
            n = max(len(p), len(q))
            p = p + (Fraction(0),) * (n - len(p))
            q = q + (Fraction(0),) * (n - len(q))
            polys.append(tuple(u + sign * v for u, v in zip(p, q)))
        pv = [self(k) + sign * other(k) for k in knots]
        return PiecewiseFn(knots, polys, pv)

    def __add__(self, other: PiecewiseFn) -> PiecewiseFn:
        return self._combine(other, 1)

    def __sub__(self, other: PiecewiseFn) -> PiecewiseFn:
        return self._combine(other, -1)

    def __mul__(self, k) -> PiecewiseFn:
        k = exact(k)
        return PiecewiseFn(
            self.knots,
            [tuple(k * a for a in c) for c in self.polys],
            [k * v for v in self.point_values],
        )

    __rmul__ = __mul__

    def __neg__(self) -> PiecewiseFn:
        return self * -1


def integrate(f: PiecewiseFn, mu: LSMeasure) -> Fraction:
    """Exact ``int f dmu``: atom terms plus polynomial-times-step-density terms."""
    if f.lo > mu.lo or f.hi < mu.hi:
        raise DomainError(
            f"integrand domain [{f.lo}, {f.hi}] does not cover [{mu.lo}, {mu.hi}]"
        )
    total = sum((f(c) * m for c, m in mu.atoms), Fraction(0))
    for s, e, r in mu.density:
        i = bisect_right(f.knots, s) - 1
        a = s
        while a < e:
            b = min(e, f.knots[i + 1])
            P = _antiderivative(f.polys[i])
            total += r * (_peval(P, b) - _peval(P, a))
            a = b
            i += 1
    return total


def compose_with_monotone(f: PiecewiseFn, W: MonotoneFn) -> PiecewiseFn:
    """``f(W(y))`` as a piecewise polynomial on the domain of ``W``.

    Where ``W`` is flat at level ``a`` the composite is the constant
    ``f(a)`` (the point value, not a limit).  Knots of ``f`` crossed by a
    rising piece of ``W`` become knots of the composite.
    """
    wlo, whi = W.range
    if wlo < f.lo or whi > f.hi:
        raise CompositionError(
            f"range [{float(wlo)}, {float(whi)}] not inside integrand domain "
            f"[{float(f.lo)}, {float(f.hi)}]"
        )
    knots: list[Fraction] = []
    polys: list[Poly] = []
    bps = W.breakpoints
    for b0, b1 in zip(bps, bps[1:]):
        knots.append(b0.x)
        a, c = b0.right, b1.left
        if a == c:
            polys.append((f(a),))
            continue
        beta = (c - a) / (b1.x - b0.x)
        alpha = a - beta * b0.x
        i = bisect_right(f.knots, a) - 1
        while True:
            polys.append(_compose_linear(f.polys[i], alpha, beta))
            k = f.knots[i + 1]
            if k >= c:
                break
            knots.append(b0.x + (k - a) / beta)
            i += 1
    knots.append(bps[-1].x)
    pv = [f(W(y)) for y in knots]
    return PiecewiseFn(knots, polys, pv)
