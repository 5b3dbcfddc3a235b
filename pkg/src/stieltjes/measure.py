"""Lebesgue-Stieltjes measures of increasing functions.

A measure is kept extensionally: a list of atoms and a piecewise-constant
density.  That is all an increasing function from :mod:`stieltjes.monotone`
can produce, and it makes interval masses exact.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

from .monotone import DomainError, MonotoneFn, exact

__all__ = [
    "LSMeasure",
    "mass",
    "measure_from",
    "preimage_mass",
    "pushforward",
    "upper_preimage_mass",
]


@dataclass(frozen=True)
class LSMeasure:
    """Finite Borel measure on ``[lo, hi]``: atoms plus a step density.

    ``atoms`` is a tuple of ``(location, mass)`` with strictly increasing
    locations and positive masses.  ``density`` is a tuple of
    ``(start, end, rate)`` pieces, sorted and non-overlapping, with positive
    rate; the density is zero off these pieces.
    """

    lo: Fraction
    hi: Fraction
    atoms: tuple[tuple[Fraction, Fraction], ...] = ()
    density: tuple[tuple[Fraction, Fraction, Fraction], ...] = ()

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("measure domain must have lo <= hi")
        prev = None
        for c, m in self.atoms:
            if m <= 0:
                raise ValueError(f"atom at {c} has non-positive mass {m}")
            if not self.lo <= c <= self.hi:
                raise DomainError(f"atom at {c} outside [{self.lo}, {self.hi}]")
            if prev is not None and c <= prev:
                raise ValueError("atom locations must be strictly increasing")
            prev = c
        end = self.lo
        for s, e, r in self.density:
            if r <= 0 or not s < e:
                raise ValueError(f"bad density piece ({s}, {e}, {r})")
            if s < end or e > self.hi:
                raise ValueError("density pieces must be sorted, disjoint and inside the domain")
            end = e

    @classmethod
    def build(cls, lo, hi, atoms=(), density=()) -> LSMeasure:
        """Canonical measure from loose parts.

        Atoms at the same location are merged and zero masses dropped;
        density pieces are summed where they overlap.
        """
        lo, hi = exact(lo), exact(hi)
        acc: dict[Fraction, Fraction] = defaultdict(Fraction)
        for c, m in atoms:
            acc[exact(c)] += exact(m)
        atom_list = tuple(sorted((c, m) for c, m in acc.items() if m != 0))
        return cls(lo, hi, atom_list, _merge_density(density))

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self.lo, self.hi

    def atom_mass(self, c) -> Fraction:
        c = exact(c)
        locs = [a for a, _ in self.atoms]
        i = bisect_left(locs, c)
        if i < len(locs) and locs[i] == c:
            return self.atoms[i][1]
        return Fraction(0)

    def rate_at(self, y) -> Fraction:
        """Density at an interior point of a density piece (zero elsewhere)."""
        y = exact(y)
        for s, e, r in self.density:
            if s < y < e:
                return r
        return Fraction(0)

    @property
    def continuous_mass(self) -> Fraction:
        return sum(((e - s) * r for s, e, r in self.density), Fraction(0))

    @property
    def total_mass(self) -> Fraction:
        return sum((m for _, m in self.atoms), Fraction(0)) + self.continuous_mass

    def __add__(self, other: LSMeasure) -> LSMeasure:
        if self.domain != other.domain:
            raise DomainError("can only add measures on the same domain")
        return LSMeasure.build(
            self.lo, self.hi, self.atoms + other.atoms, self.density + other.density
        )

    def mass(self, lo, hi, lo_closed: bool = True, hi_closed: bool = True) -> Fraction:
        return mass(self, lo, hi, lo_closed, hi_closed)


def _merge_density(pieces) -> tuple[tuple[Fraction, Fraction, Fraction], ...]:
    pieces = [(exact(s), exact(e), exact(r)) for s, e, r in pieces]
    pieces = [p for p in pieces if p[2] != 0 and p[0] < p[1]]
    if not pieces:
        return ()
    cuts = sorted({v for s, e, _ in pieces for v in (s, e)})
    out = []
    for u0, u1 in zip(cuts, cuts[1:]):
        r = sum((rr for s, e, rr in pieces if s <= u0 and u1 <= e), Fraction(0))
        if r == 0:
            continue
        if out and out[-1][1] == u0 and out[-1][2] == r:
            out[-1] = (out[-1][0], u1, r)
        else:
            out.append((u0, u1, r))
    return tuple(out)


def measure_from(F: MonotoneFn) -> LSMeasure:
    """The measure ``mu`` with ``mu((s, t]) = F(t+) - F(s+)`` and so on.

    Atoms sit where ``F(x+) != F(x-)``; at the ends of the domain the stored
    conventions give ``mu({lo}) = F(lo+) - F(lo)`` and
    ``mu({hi}) = F(hi) - F(hi-)``.
    """
    atoms = [(b.x, b.right - b.left) for b in F.breakpoints]
    density = [(s.x, t.x, seg.slope) for s, t, seg in zip(F.breakpoints, F.breakpoints[1:], F.segments)]
    return LSMeasure.build(F.lo, F.hi, atoms, density)


def mass(mu: LSMeasure, lo, hi, lo_closed: bool = True, hi_closed: bool = True) -> Fraction:
    """Mass of an interval with either end open or closed."""
    lo, hi = exact(lo), exact(hi)
    if lo > hi:
        raise ValueError(f"malformed interval: lo={lo} > hi={hi}")
    if lo < mu.lo or hi > mu.hi:
        raise DomainError(f"interval [{lo}, {hi}] not inside [{mu.lo}, {mu.hi}]")
    if lo == hi and not (lo_closed and hi_closed):
        return Fraction(0)
    locs = [c for c, _ in mu.atoms]
    i0 = bisect_left(locs, lo) if lo_closed else bisect_right(locs, lo)
    i1 = bisect_right(locs, hi) if hi_closed else bisect_left(locs, hi)
    total = sum((m for _, m in mu.atoms[i0:i1]), Fraction(0))
    for s, e, r in mu.density:
        a, b = max(s, lo), min(e, hi)
        if a < b:
            total += (b - a) * r
    return total


def preimage_mass(nu: LSMeasure, M: MonotoneFn, x) -> Fraction:
    """``nu(X^{-1}[[lo, x]])`` for the left-continuous inverse ``X`` of ``M``.

    Uses ``X(y) <= x  <=>  y <= M(x+)``, so no inverse is built.
    """
    x = exact(x)
    _check_span(nu, M, x)
    return mass(nu, M.range[0], M.right(x))


def upper_preimage_mass(nu: LSMeasure, M: MonotoneFn, x) -> Fraction:
    """``nu(Xi^{-1}[[x, hi]])`` for the right-continuous inverse ``Xi`` of ``M``.

    Uses ``Xi(y) >= x  <=>  y >= M(x-)``.
    """
    x = exact(x)
    _check_span(nu, M, x)
    return mass(nu, M.left(x), M.range[1])


def _check_span(nu: LSMeasure, M: MonotoneFn, x: Fraction) -> None:
    if not M.lo <= x <= M.hi:
        raise DomainError(f"x={x} outside [{M.lo}, {M.hi}]")
    ylo, yhi = M.range
    if nu.lo > ylo or nu.hi < yhi:
        raise ValueError(
            f"measure domain [{nu.lo}, {nu.hi}] does not cover the range [{ylo}, {yhi}]"
        )


def pushforward(nu: LSMeasure, W: MonotoneFn, domain=None) -> LSMeasure:
    """Image measure ``E -> nu(W^{-1}[E])`` under an increasing map ``W``.

    Atoms of ``nu`` move to ``W(y)``.  On a piece where ``W`` is linear with
    positive slope the density is divided by that slope; where ``W`` is flat
    the whole continuous mass of the piece collapses onto one atom.
    ``domain`` defaults to ``[W(nu.lo), W(nu.hi)]``.
    """
    if nu.lo < W.lo or nu.hi > W.hi:
        raise DomainError("map must be defined on the whole domain of the measure")
    if domain is None:
        domain = (W(nu.lo), W(nu.hi))
    atoms = [(W(y), m) for y, m in nu.atoms]
    density = []
    cuts = {nu.lo, nu.hi}
    cuts.update(x for x in W.xs if nu.lo < x < nu.hi)
    for s, e, _ in nu.density:
        cuts.update((s, e))
    cuts = sorted(cuts)
    for y0, y1 in zip(cuts, cuts[1:]):
        r = nu.rate_at((y0 + y1) / 2)
        if r == 0:
            continue
        m = r * (y1 - y0)
        a, b = W.right(y0), W.left(y1)
        if a == b:
            atoms.append((a, m))
        else:
            density.append((a, b, m / (b - a)))
    return LSMeasure.build(domain[0], domain[1], atoms, density)
