"""Seeded random instances ``(M, N, f)`` for property checks.

All numbers live on a dyadic grid (multiples of 1/64) so that they are
exact as floats and so that levels of ``M`` and breakpoints of ``N`` can
coincide exactly, which is where the interesting cases are.

Recipe for an increasing function with ``k <= 10`` segments: draw
``3 (k + 1)`` levels from ``[-2, 2]``, sort them, read them as
``(left, value, right)`` triples, then with probability ``1 - p_jump``
collapse a triple to a continuity point and with probability ``p_flat``
make a segment flat by pulling the next left limit down.  Collapsing only
lowers values, so the sorted order survives.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .integrand import PiecewiseFn, _compose_linear
from .monotone import MonotoneFn, flat_levels

__all__ = [
    "GRID",
    "Instance",
    "default_seed",
    "random_instance",
    "random_integrand",
    "random_monotone",
    "random_monotone_integrand",
]

GRID = 64
MAX_SEGMENTS = 10
P_JUMP = 0.4
P_FLAT = 0.4


def default_seed() -> int:
    return int(os.environ.get("STIELTJES_SEED", "0"))


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _grid(rng, lo: float, hi: float, size=None):
    a, b = int(np.ceil(lo * GRID)), int(np.floor(hi * GRID))
    v = rng.integers(a, b + 1, size=size)
    if size is None:
        return Fraction(int(v), GRID)
    return [Fraction(int(t), GRID) for t in v]


def _interior_points(rng, lo: Fraction, hi: Fraction, count: int) -> list[Fraction]:
    a, b = int(lo * GRID) + 1, int(hi * GRID) - 1
    count = min(count, max(0, b - a + 1))
    if count == 0:
        return []
    picks = rng.choice(np.arange(a, b + 1), size=count, replace=False)
    return sorted(Fraction(int(p), GRID) for p in picks)


def _triples(rng, n: int, lo=-2.0, hi=2.0) -> list[list[Fraction]]:
    raw = sorted(_grid(rng, lo, hi, size=3 * n))
    return [raw[3 * i: 3 * i + 3] for i in range(n)]


def _shape_jump(rng, t: list[Fraction], jump: bool, kind: str = "any") -> None:
    """Turn a sorted triple into a continuity point or a jump of ``kind``."""
    left = t[0]
    if not jump:
        t[1] = t[2] = left
        return
    if kind == "any":
        kind = ("two-sided", "right", "left")[int(rng.integers(3))]
    if kind == "right":
        t[1] = t[2]
    elif kind == "left":
        t[1] = left


def random_monotone(
    seed=None,
    lo=None,
    hi=None,
    max_segments: int = MAX_SEGMENTS,
    p_jump: float = P_JUMP,
    p_flat: float = P_FLAT,
    continuous: bool = False,
    strictly_increasing: bool = False,
    one_sided: str | None = None,
) -> MonotoneFn:
    """Random increasing function; never constant.

    ``one_sided="left"`` (or ``"right"``) makes every jump left (right)
    continuous.
    """
    rng = _rng(seed)
    if lo is None:
        lo = _grid(rng, -2, 1)
    if hi is None:
        hi = lo + _grid(rng, 1, 4)
    lo, hi = Fraction(lo), Fraction(hi)
    while True:
        k = int(rng.integers(1, max_segments + 1))
        xs = [lo] + _interior_points(rng, lo, hi, k - 1) + [hi]
        trip = _triples(rng, len(xs))
        for i, t in enumerate(trip):
            if i and not strictly_increasing and rng.random() < p_flat:
                t[0] = trip[i - 1][2]
            _shape_jump(rng, t, jump=not continuous and rng.random() < p_jump,
                        kind=one_sided or "any")
        trip[0][0] = trip[0][1]
        trip[-1][2] = trip[-1][1]
        if strictly_increasing and any(
            trip[i][2] >= trip[i + 1][0] for i in range(len(trip) - 1)
        ):
            continue
        F = MonotoneFn((x, *t) for x, t in zip(xs, trip))
        if F.range[0] < F.range[1]:
            return F


def random_outer(
    seed,
    M: MonotoneFn,
    at_flats: str = "any",
    max_segments: int = MAX_SEGMENTS,
    p_jump: float = P_JUMP,
    pad: bool | None = None,
) -> MonotoneFn:
    """Random increasing ``N`` defined on (at least) the range of ``M``.

    Every flat level of ``M`` is a breakpoint of ``N``.  ``at_flats``
    selects the behaviour of ``N`` there: ``"any"``, ``"right"``
    (right-continuous), ``"left"`` (left-continuous) or ``"continuous"``.
    Other breakpoints are random, with some drawn from the levels ``M``
    takes at its own breakpoints.
    """
    rng = _rng(seed)
    ylo, yhi = M.range
    if pad is None:
        pad = rng.random() < 0.25
    lo = ylo - (_grid(rng, 0, 1) if pad else 0)
    hi = yhi + (_grid(rng, 0, 1) if pad else 0)
    H = set(flat_levels(M).ys)
    levels = {v for b in M.breakpoints for v in b[1:] if lo < v < hi}
    extra = [y for y in levels if rng.random() < 0.3]
    k = int(rng.integers(0, max_segments))
    pts = set(_interior_points(rng, lo, hi, k)) | set(extra) | {y for y in H if lo < y < hi}
    xs = [lo] + sorted(p for p in pts if lo < p < hi) + [hi]
    trip = _triples(rng, len(xs))
    for i, (x, t) in enumerate(zip(xs, trip)):
        if x in H and at_flats != "any":
            kind = {"right": "right", "left": "left", "continuous": None}[at_flats]
            jump = kind is not None and rng.random() < 0.7
            _shape_jump(rng, t, jump=jump, kind=kind or "any")
        elif x in H:
            _shape_jump(rng, t, jump=rng.random() < 0.8)
        else:
            _shape_jump(rng, t, jump=rng.random() < p_jump)
    trip[0][0] = trip[0][1]
    trip[-1][2] = trip[-1][1]
    return MonotoneFn((x, *t) for x, t in zip(xs, trip))


def random_integrand(
    seed,
    lo,
    hi,
    max_pieces: int = MAX_SEGMENTS,
    continuous: bool = False,
    candidates=(),
    max_degree: int = 3,
    min_degree: int = 0,
) -> PiecewiseFn:
    """Random piecewise polynomial on ``[lo, hi]`` with coefficients on the grid.

    Each polynomial is written around the left end of its piece, then
    expanded.  ``candidates`` are preferred knot locations (for instance
    the breakpoints of ``M``, where atoms sit).
    """
    rng = _rng(seed)
    lo, hi = Fraction(lo), Fraction(hi)
    k = int(rng.integers(1, max_pieces + 1))
    cand = [c for c in candidates if lo < c < hi and rng.random() < 0.5]
    knots = sorted(set(_interior_points(rng, lo, hi, k - 1)) | set(cand))
    knots = [lo] + knots + [hi]
    polys = []
    for a in knots[:-1]:
        deg = int(rng.integers(min_degree, max_degree + 1))
        local = _grid(rng, -2, 2, size=deg + 1)
        if min_degree >= 1 and local[-1] == 0:
            local[-1] = Fraction(1, 2)
        polys.append(_compose_linear(tuple(local), -a, Fraction(1)))
    f = PiecewiseFn(knots, polys, [0] * len(knots))
    pv = []
    for i, x in enumerate(knots):
        l, r = f.limit(x, "left"), f.limit(x, "right")
        if i == 0:
            l = r
        if i == len(knots) - 1:
            r = l
        if continuous:
            pv.append(l)
        else:
            pv.append((l, r, _grid(rng, -2, 2))[int(rng.integers(3))])
    f = PiecewiseFn(knots, polys, pv)
    if continuous:
        # shift each piece so that it starts where the previous one ended
        polys = list(f.polys)
        for i in range(1, len(polys)):
            x = knots[i]
            prev_end = _eval(polys[i - 1], x)
            polys[i] = (polys[i][0] + prev_end - _eval(polys[i], x),) + polys[i][1:]
        pv = [_eval(polys[0], knots[0])] + [_eval(p, x) for p, x in zip(polys, knots[1:])]
        f = PiecewiseFn(knots, polys, pv)
    return f


def random_monotone_integrand(
    seed, lo, hi, decreasing: bool = False, max_pieces: int = MAX_SEGMENTS, candidates=()
) -> PiecewiseFn:
    """Random increasing (or decreasing) piecewise polynomial.

    Around its left end ``s`` each piece is ``a + b t + c t^2 + d t^3`` with
    ``t = x - s`` and ``b, c, d >= 0``; jumps go upwards and the point value
    at a knot lies between the one-sided limits.
    """
    rng = _rng(seed)
    lo, hi = Fraction(lo), Fraction(hi)
    k = int(rng.integers(1, max_pieces + 1))
    cand = [c for c in candidates if lo < c < hi and rng.random() < 0.5]
    knots = [lo] + sorted(set(_interior_points(rng, lo, hi, k - 1)) | set(cand)) + [hi]
    polys, pv = [], []
    level = _grid(rng, -2, 2)
    for i, a in enumerate(knots[:-1]):
        jump = _grid(rng, 0, 1) if rng.random() < 0.5 else Fraction(0)
        start = level + jump
        if i == 0:
            pv.append(start)
        else:
            pv.append(level + (jump * int(rng.integers(3))) / 2)
        b, c, d = _grid(rng, 0, 2, size=3)
        if rng.random() < 0.3:
            b = c = d = Fraction(0)
        local = (start, b, c, d)
        polys.append(_compose_linear(local, -a, Fraction(1)))
        level = _eval(polys[-1], knots[i + 1])
    pv.append(level)
    f = PiecewiseFn(knots, polys, pv)
    return -f if decreasing else f


def _eval(c, x):
    acc = Fraction(0)
    for a in reversed(c):
        acc = acc * x + a
    return acc


@dataclass(frozen=True)
class Instance:
    seed: int
    M: MonotoneFn
    N: MonotoneFn
    f: PiecewiseFn


def random_instance(
    seed: int,
    at_flats: str = "any",
    m_continuous: bool = False,
    m_strict: bool = False,
    m_one_sided: str | None = None,
    integrand: str = "any",
    on: str = "domain",
) -> Instance:
    """One reproducible ``(M, N, f)`` triple.

    ``integrand`` is ``"any"``, ``"continuous"``, ``"increasing"`` or
    ``"decreasing"``; ``on`` puts it on the domain of ``M`` (as ``f``) or on
    its range (as ``g``).
    """
    rng = np.random.default_rng(seed)
    M = random_monotone(rng, continuous=m_continuous, strictly_increasing=m_strict,
                        one_sided=m_one_sided)
    N = random_outer(rng, M, at_flats=at_flats)
    if on == "domain":
        lo, hi = M.domain
        cands = list(M.xs) + [x for lv in flat_levels(M) for x in lv[1:]]
    else:
        lo, hi = M.range
        cands = list(N.xs) + list(flat_levels(M).ys)
    if integrand in ("increasing", "decreasing"):
        f = random_monotone_integrand(rng, lo, hi, decreasing=integrand == "decreasing",
                                      candidates=cands)
    else:
        f = random_integrand(rng, lo, hi, continuous=integrand == "continuous", candidates=cands)
    return Instance(seed, M, N, f)
