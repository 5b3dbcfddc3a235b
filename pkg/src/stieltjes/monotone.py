"""Increasing functions on a closed interval.

A :class:`MonotoneFn` is a finite list of breakpoints, each carrying the left
limit, the value and the right limit of the function at that point.  Between
two consecutive breakpoints the function is linear (possibly constant), so it
is fully determined by the right limit at the first breakpoint and the left
limit at the second one.

All numbers are held as :class:`fractions.Fraction`.  Floats passed in are
converted exactly, so every construction here (composition, inverses, flat
levels) is carried out without rounding, and equality tests are exact.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

__all__ = [
    "Breakpoint",
    "CompositionError",
    "DomainError",
    "FlatLevel",
    "FlatLevels",
    "MonotoneFn",
    "Segment",
    "compose",
    "eval_at",
    "exact",
    "flat_levels",
    "left_inverse",
    "right_inverse",
    "selector_inverse",
]

SIDES = ("left", "value", "right")


class DomainError(ValueError):
    """A point lies outside the domain of a function."""


class CompositionError(ValueError):
    """The range of the inner function is not inside the outer domain."""


def exact(v) -> Fraction:
    """Convert ``v`` to a Fraction without rounding.

    Strings are read as exact decimals or ``"p/q"`` ratios; floats keep their
    binary value.  NaN and infinities are rejected.
    """
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(v, str):
        return Fraction(v.strip())
    try:
        return Fraction(v)
    except TypeError:
        return Fraction(float(v))


class Breakpoint(NamedTuple):
    x: Fraction
    left: Fraction
    value: Fraction
    right: Fraction

    @property
    def is_jump(self) -> bool:
        return self.left != self.right or self.left != self.value


class Segment(NamedTuple):
    """The linear piece on the open interval between two breakpoints.

    ``anchor`` is the limit of the piece at its left end.
    """

    kind: str
    slope: Fraction
    anchor: Fraction


class MonotoneFn:
    """Increasing function on ``[lo, hi]`` with finitely many pieces and jumps.

    Parameters
    ----------
    breakpoints
        Iterable of ``(x, left, value, right)`` records with strictly
        increasing ``x``.  The first record sits at ``lo`` and must have
        ``left == value``; the last sits at ``hi`` and must have
        ``right == value``.

    Instances are immutable.
    """

    __slots__ = ("_bps", "_xs")

    def __init__(self, breakpoints: Iterable):
        bps = tuple(Breakpoint(*(exact(v) for v in b)) for b in breakpoints)
        _validate(bps)
        self._bps = bps
        self._xs = tuple(b.x for b in bps)

    # -- construction helpers -------------------------------------------

    @classmethod
    def continuous(cls, xs, ys) -> MonotoneFn:
        """Continuous piecewise-linear function through the points ``(xs, ys)``."""
        if len(xs) != len(ys):
            raise ValueError("xs and ys must have the same length")
        return cls((x, y, y, y) for x, y in zip(xs, ys))

    @classmethod
    def identity(cls, lo, hi) -> MonotoneFn:
        return cls.continuous([lo, hi], [lo, hi])

    @classmethod
    def constant(cls, c, lo, hi) -> MonotoneFn:
        return cls.continuous([lo, hi], [c, c])

    @classmethod
    def step(cls, lo, hi, at, height, closed: bool = True) -> MonotoneFn:
        """``height`` times the indicator of ``[at, hi]`` (or ``(at, hi]``)."""
        lo, hi, at, height = (exact(v) for v in (lo, hi, at, height))
        if height < 0:
            raise ValueError("step height must be nonnegative")
        if not lo <= at <= hi:
            raise DomainError(f"step location {at} outside [{lo}, {hi}]")
        z = Fraction(0)
        at_value = height if closed else z
        if at == lo:
            pts = [(lo, at_value, at_value, height), (hi, height, height, height)]
        elif at == hi:
            pts = [(lo, z, z, z), (hi, z, at_value, at_value)]
        else:
            pts = [(lo, z, z, z), (at, z, at_value, height), (hi, height, height, height)]
        return cls(pts).simplify()

    @classmethod
    def from_segments(cls, breakpoints, segments, rel_tol: float = 1e-12) -> MonotoneFn:
        """Build from breakpoints and check that ``segments`` agree with them.

        The breakpoints are authoritative; each segment's ``slope`` and
        ``anchor`` must reproduce the neighbouring limits up to ``rel_tol``
        (decimal inputs such as a slope of 0.333... are rarely exact).
        """
        fn = cls(breakpoints)
        segments = list(segments)
        if len(segments) != len(fn._bps) - 1:
            raise ValueError(
                f"expected {len(fn._bps) - 1} segments, got {len(segments)}"
            )
        for i, (seg, expect) in enumerate(zip(segments, fn.segments)):
            kind, slope, anchor = seg
            if kind not in ("linear", "constant"):
                raise ValueError(f"segments[{i}].kind must be 'linear' or 'constant'")
            slope, anchor = exact(slope), exact(anchor)
            if kind == "constant" and slope != 0:
                raise ValueError(f"segments[{i}]: constant segment with nonzero slope")
            if kind == "constant" and expect.kind != "constant":
                raise ValueError(f"segments[{i}]: breakpoints do not describe a constant piece")
            scale = max(1, abs(expect.anchor), abs(expect.slope))
            if abs(slope - expect.slope) > rel_tol * scale:
                raise ValueError(
                    f"segments[{i}].slope {float(slope)} disagrees with breakpoints "
                    f"({float(expect.slope)})"
                )
            if abs(anchor - expect.anchor) > rel_tol * scale:
                raise ValueError(
                    f"segments[{i}].anchor {float(anchor)} disagrees with breakpoints "
                    f"({float(expect.anchor)})"
                )
        return fn

    # -- basic accessors ------------------------------------------------

    @property
    def breakpoints(self) -> tuple[Breakpoint, ...]:
        return self._bps

    @property
    def xs(self) -> tuple[Fraction, ...]:
        return self._xs

    @property
    def lo(self) -> Fraction:
        return self._xs[0]

    @property
    def hi(self) -> Fraction:
        return self._xs[-1]

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self._xs[0], self._xs[-1]

    @property
    def range(self) -> tuple[Fraction, Fraction]:
        return self._bps[0].value, self._bps[-1].value

    @property
    def segments(self) -> tuple[Segment, ...]:
        out = []
        for b0, b1 in zip(self._bps, self._bps[1:]):
            slope = (b1.left - b0.right) / (b1.x - b0.x)
            out.append(Segment("constant" if slope == 0 else "linear", slope, b0.right))
        return tuple(out)

    def __repr__(self):
        pts = ", ".join(
            f"({float(b.x):g}: {float(b.left):g}|{float(b.value):g}|{float(b.right):g})"
            for b in self._bps
        )
        return f"MonotoneFn[{pts}]"

    def __eq__(self, other):
        if not isinstance(other, MonotoneFn):
            return NotImplemented
        return self._bps == other._bps

    def __hash__(self):
        return hash(self._bps)

    # -- evaluation -----------------------------------------------------

    def eval_at(self, x, side: str = "value") -> Fraction:
        """Value or one-sided limit at ``x``.

        ``side="left"`` at ``lo`` and ``side="right"`` at ``hi`` return the
        value there.
        """
        if side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}, got {side!r}")
        x = exact(x)
        if not self.lo <= x <= self.hi:
            raise DomainError(f"x={x} outside domain [{self.lo}, {self.hi}]")
        i = bisect_right(self._xs, x) - 1
        b0 = self._bps[i]
        if b0.x == x:
            return getattr(b0, side)
        b1 = self._bps[i + 1]
        return b0.right + (b1.left - b0.right) * (x - b0.x) / (b1.x - b0.x)

    def __call__(self, x) -> Fraction:
        return self.eval_at(x)

    def left(self, x) -> Fraction:
        return self.eval_at(x, "left")

    def right(self, x) -> Fraction:
        return self.eval_at(x, "right")

    # -- continuity queries ---------------------------------------------

    def is_continuous(self) -> bool:
        return not any(b.is_jump for b in self._bps)

    def is_left_continuous(self) -> bool:
        return all(b.left == b.value for b in self._bps)

    def is_right_continuous(self) -> bool:
        return all(b.value == b.right for b in self._bps)

    def is_strictly_increasing(self) -> bool:
        return all(s.kind == "linear" for s in self.segments)

    # -- algebra --------------------------------------------------------

    def _pointwise(self, other: MonotoneFn, op) -> MonotoneFn:
        if self.domain != other.domain:
            raise DomainError("pointwise operations need identical domains")
        xs = sorted(set(self._xs) | set(other._xs))
        pts = []
        for x in xs:
            pts.append(
                (x, *(op(self.eval_at(x, s), other.eval_at(x, s)) for s in SIDES))
            )
        return MonotoneFn(pts).simplify()

    def __add__(self, other: MonotoneFn) -> MonotoneFn:
        return self._pointwise(other, lambda a, b: a + b)

    def __sub__(self, other: MonotoneFn) -> MonotoneFn:
        # raises ValueError if the difference is not increasing
        return self._pointwise(other, lambda a, b: a - b)

    def scale(self, c) -> MonotoneFn:
        c = exact(c)
        if c < 0:
            raise ValueError("scaling by a negative number breaks monotonicity")
        return MonotoneFn((b.x, c * b.left, c * b.value, c * b.right) for b in self._bps)

    def shift(self, c) -> MonotoneFn:
        c = exact(c)
        return MonotoneFn((b.x, b.left + c, b.value + c, b.right + c) for b in self._bps)

    def simplify(self) -> MonotoneFn:
        """Drop interior breakpoints where nothing happens.

        A breakpoint is redundant when the function is continuous there and
        the pieces on both sides have the same slope.
        """
        bps = list(self._bps)
        keep = [bps[0]]
        for i in range(1, len(bps) - 1):
            b, nxt = bps[i], bps[i + 1]
            prev = keep[-1]
            if not b.is_jump:
                s0 = (b.left - prev.right) / (b.x - prev.x)
                s1 = (nxt.left - b.right) / (nxt.x - b.x)
                if s0 == s1:
                    continue
            keep.append(b)
        keep.append(bps[-1])
        if len(keep) == len(bps):
            return self
        return MonotoneFn(keep)

    def restrict(self, lo, hi) -> MonotoneFn:
        """Restriction to ``[lo, hi]`` with the endpoint conventions re-applied.

        The new left endpoint has its left limit set to its value and the new
        right endpoint has its right limit set to its value, so the measure of
        the restriction puts no mass outside the closed interval.
        """
        lo, hi = exact(lo), exact(hi)
        if not self.lo <= lo < hi <= self.hi:
            raise DomainError(f"[{lo}, {hi}] is not a nondegenerate subinterval of the domain")
        v = self.eval_at(lo)
        pts = [(lo, v, v, self.eval_at(lo, "right"))]
        pts.extend(b for b in self._bps if lo < b.x < hi)
        v = self.eval_at(hi)
        pts.append((hi, self.eval_at(hi, "left"), v, v))
        return MonotoneFn(pts)


def _validate(bps: tuple[Breakpoint, ...]) -> None:
    if len(bps) < 2:
        raise ValueError("need at least two breakpoints (domain lo < hi)")
    for i, b in enumerate(bps):
        if i and not bps[i - 1].x < b.x:
            raise ValueError(f"breakpoints[{i}].x must be strictly increasing")
        if not b.left <= b.value <= b.right:
            raise ValueError(f"breakpoints[{i}]: need left <= value <= right")
        if i and bps[i - 1].right > b.left:
            raise ValueError(f"segment {i - 1} is decreasing")
    if bps[0].left != bps[0].value:
        raise ValueError("breakpoints[0]: left limit at lo must equal the value")
    if bps[-1].right != bps[-1].value:
        raise ValueError(f"breakpoints[{len(bps) - 1}]: right limit at hi must equal the value")


def eval_at(F: MonotoneFn, x, side: str = "value") -> Fraction:
    return F.eval_at(x, side)


# -- composition ----------------------------------------------------------


def compose(N: MonotoneFn, M: MonotoneFn) -> MonotoneFn:
    """The composite ``N(M(x))`` on the domain of ``M``.

    Breakpoints of the result are those of ``M`` plus every point where a
    strictly increasing piece of ``M`` passes through a breakpoint of ``N``.
    At a breakpoint of ``M``, the left limit of the composite is
    ``N(M(x-)-)`` when ``M`` increases strictly into ``x`` and ``N(M(x-))``
    when ``M`` is flat there; right limits are symmetric.
    """
    ylo, yhi = M.range
    if ylo < N.lo or yhi > N.hi:
        raise CompositionError(
            f"range [{float(ylo)}, {float(yhi)}] of inner function not inside "
            f"domain [{float(N.lo)}, {float(N.hi)}]"
        )
    bps = M.breakpoints
    last = len(bps) - 1
    nxs = N.xs
    out = []
    for i, b in enumerate(bps):
        value = N(b.value)
        if i == 0:
            left = value
        else:
            a = bps[i - 1].right
            left = N(b.left) if a == b.left else N.left(b.left)
        if i == last:
            out.append((b.x, left, value, value))
            break
        c = bps[i + 1].left
        right = N(b.right) if b.right == c else N.right(b.right)
        out.append((b.x, left, value, right))
        if b.right < c:
            a = b.right
            x0, x1 = b.x, bps[i + 1].x
            lo_i = bisect_right(nxs, a)
            for y in nxs[lo_i:]:
                if y >= c:
                    break
                x = x0 + (y - a) * (x1 - x0) / (c - a)
                out.append((x, N.left(y), N(y), N.right(y)))
    return MonotoneFn(out).simplify()


# -- generalized inverses -------------------------------------------------


def _level_table(M: MonotoneFn) -> list[list[Fraction]]:
    """Rows ``[y, x_min, x_max]`` over the vertices of the completed graph.

    The completed graph joins the jumps of ``M`` by vertical pieces.  Reading
    it sideways gives the inverses: between consecutive rows it is a single
    straight piece, and a row with ``x_min < x_max`` is a flat level.
    """
    rows: list[list[Fraction]] = []
    for b in M.breakpoints:
        for y in (b.left, b.right):
            if rows and rows[-1][0] == y:
                rows[-1][2] = b.x
            else:
                rows.append([y, b.x, b.x])
    return rows


def selector_inverse(M: MonotoneFn, theta=Fraction(1, 2)) -> MonotoneFn:
    """Generalized inverse ``X + theta * (Xi - X)`` on ``[M(lo), M(hi)]``.

    ``theta=0`` gives the left-continuous inverse ``X``, ``theta=1`` the
    right-continuous inverse ``Xi``.  Any ``theta`` in between gives an
    increasing map squeezed between them.
    """
    theta = exact(theta)
    if not 0 <= theta <= 1:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    rows = _level_table(M)
    if len(rows) < 2:
        raise ValueError("constant function: its range is a single point")
    out = []
    last = len(rows) - 1
    for k, (y, x_min, x_max) in enumerate(rows):
        value = x_min + theta * (x_max - x_min)
        left = value if k == 0 else x_min
        right = value if k == last else x_max
        out.append((y, left, value, right))
    return MonotoneFn(out).simplify()


def left_inverse(M: MonotoneFn) -> MonotoneFn:
    """``X(y) = inf{x : y <= M(x)}``, the left-continuous generalized inverse."""
    return selector_inverse(M, 0)


def right_inverse(M: MonotoneFn) -> MonotoneFn:
    """``Xi(y) = sup{x : M(x) <= y}``, the right-continuous generalized inverse."""
    return selector_inverse(M, 1)


# -- flat levels ----------------------------------------------------------


class FlatLevel(NamedTuple):
    y: Fraction
    x_left: Fraction
    x_right: Fraction


@dataclass(frozen=True)
class FlatLevels:
    """Levels at which ``M`` is constant on a non-degenerate interval.

    ``span`` is ``(M(lo), M(hi))``; it is kept so that the endpoint
    conventions can be applied to functions defined on the range of ``M``.
    """

    levels: tuple[FlatLevel, ...]
    span: tuple[Fraction, Fraction]

    def __iter__(self):
        return iter(self.levels)

    def __len__(self):
        return len(self.levels)

    def __bool__(self):
        return bool(self.levels)

    def __contains__(self, y) -> bool:
        y = exact(y)
        return any(lv.y == y for lv in self.levels)

    @property
    def ys(self) -> tuple[Fraction, ...]:
        return tuple(lv.y for lv in self.levels)


def flat_levels(M: MonotoneFn) -> FlatLevels:
    rows = _level_table(M)
    levels = tuple(FlatLevel(y, a, b) for y, a, b in rows if a < b)
    return FlatLevels(levels, M.range)
