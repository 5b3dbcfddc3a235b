"""Change of variables for ``int f(x) dN(M(x))`` with discontinuous ``M`` and ``N``.

The composite measure of ``N o M`` is compared with the measure of ``N``
pulled back through the generalized inverses of ``M``.  When ``N`` jumps at a
level where ``M`` is flat, the mass of that jump is split: the left jump
lands on the left end of the flat interval and the right jump on its right
end.  Everything here is exact; residuals are zero up to the exactness of
the inputs and tolerances only matter for callers that pass in rounded data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .integrand import PiecewiseFn, compose_with_monotone, integrate
from .measure import LSMeasure, mass, measure_from, preimage_mass, upper_preimage_mass
from .monotone import (
    DomainError,
    FlatLevels,
    MonotoneFn,
    compose,
    exact,
    flat_levels,
    left_inverse,
    right_inverse,
    selector_inverse,
)

__all__ = [
    "IDENTITY_TAGS",
    "INEQUALITY_TAGS",
    "Decomposition",
    "Jump",
    "JumpSplit",
    "PreconditionError",
    "RhsTerms",
    "VerificationReport",
    "check_inequalities",
    "cov_lhs",
    "cov_rhs",
    "decompose",
    "jump_split",
    "verify_identity",
]

IDENTITY_TAGS = ("eq1", "eq2", "eq3", "eq4", "eq5", "eq6")
INEQUALITY_TAGS = ("ineq7", "ineq8", "ineq9")

DEFAULT_TOL = 1e-9


class PreconditionError(ValueError):
    """The inputs do not meet the hypothesis of the requested identity."""

    def __init__(self, message: str, level=None):
        super().__init__(message)
        self.level = level


class Jump(NamedTuple):
    y: Fraction
    delta_minus: Fraction
    delta_plus: Fraction


@dataclass(frozen=True)
class JumpSplit:
    jumps: tuple[Jump, ...]

    def __iter__(self):
        return iter(self.jumps)

    def __len__(self):
        return len(self.jumps)

    @property
    def total(self) -> Fraction:
        return sum((j.delta_minus + j.delta_plus for j in self.jumps), Fraction(0))


@dataclass(frozen=True)
class Decomposition:
    """``N = n1 + n2 + n3`` on the range of ``M``.

    ``n2`` collects the left jumps of ``N`` at the flat levels (right
    continuous), ``n3`` the right jumps (left continuous), ``n1`` the rest.
    """

    n1: MonotoneFn
    n2: MonotoneFn
    n3: MonotoneFn
    split: JumpSplit


class RhsTerms(NamedTuple):
    term_n1: Fraction
    term_minus: Fraction
    term_plus: Fraction

    @property
    def total(self) -> Fraction:
        return self.term_n1 + self.term_minus + self.term_plus


@dataclass
class VerificationReport:
    """Outcome of checking one identity or inequality on one instance.

    ``relation`` is ``"=="`` for identities.  For inequalities it is
    ``"<="`` (lhs below rhs) or ``">="``, and ``slack`` is the signed
    margin, negative when the inequality fails.
    """

    tag: str
    lhs: Fraction
    rhs_terms: list[tuple[str, Fraction]]
    tolerance: float
    relation: str = "=="
    forced: bool = False
    violations: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def rhs_total(self) -> Fraction:
        return sum((v for _, v in self.rhs_terms), Fraction(0))

    @property
    def residual(self) -> Fraction:
        return self.lhs - self.rhs_total

    @property
    def slack(self) -> Fraction:
        if self.relation == "<=":
            return -self.residual
        if self.relation == ">=":
            return self.residual
        return -abs(self.residual)

    @property
    def passed(self) -> bool:
        if self.relation == "==":
            return abs(self.residual) <= self.tolerance
        return self.slack >= -self.tolerance

    def to_dict(self) -> dict:
        out = {
            "tag": self.tag,
            "relation": self.relation,
            "lhs": float(self.lhs),
            "rhs_terms": [{"name": n, "value": float(v)} for n, v in self.rhs_terms],
            "rhs_total": float(self.rhs_total),
            "residual": float(self.residual),
            "tolerance": self.tolerance,
            "pass": self.passed,
        }
        if self.relation != "==":
            out["slack"] = float(self.slack)
        if self.forced:
            out["forced"] = True
            out["violations"] = list(self.violations)
        if self.details:
            out["details"] = self.details
        return out


# -- jump decomposition ---------------------------------------------------


def _on_span(N: MonotoneFn, H: FlatLevels) -> MonotoneFn:
    ylo, yhi = H.span
    if ylo < N.lo or yhi > N.hi:
        raise DomainError(
            f"range [{float(ylo)}, {float(yhi)}] not inside [{float(N.lo)}, {float(N.hi)}]"
        )
    if (ylo, yhi) == N.domain:
        return N
    return N.restrict(ylo, yhi)


def jump_split(N: MonotoneFn, H: FlatLevels) -> JumpSplit:
    """Left and right jumps of ``N`` at each flat level.

    At ``M(lo)`` the left jump is taken as zero and at ``M(hi)`` the right
    jump is, as ``N`` is considered only on ``[M(lo), M(hi)]``.
    """
    for lv in H:
        if not N.lo <= lv.y <= N.hi:
            raise ValueError(f"flat level y={lv.y} outside [{N.lo}, {N.hi}]")
    if H.span[0] == H.span[1]:
        return JumpSplit(tuple(Jump(lv.y, Fraction(0), Fraction(0)) for lv in H))
    Nr = _on_span(N, H)
    return JumpSplit(
        tuple(Jump(lv.y, Nr(lv.y) - Nr.left(lv.y), Nr.right(lv.y) - Nr(lv.y)) for lv in H)
    )


def decompose(N: MonotoneFn, H: FlatLevels) -> Decomposition:
    split = jump_split(N, H)
    Nr = _on_span(N, H)
    lo, hi = Nr.domain
    zero = MonotoneFn.constant(0, lo, hi)
    n2, n3 = zero, zero
    for j in split:
        if j.delta_minus:
            n2 = n2 + MonotoneFn.step(lo, hi, j.y, j.delta_minus, closed=True)
        if j.delta_plus:
            n3 = n3 + MonotoneFn.step(lo, hi, j.y, j.delta_plus, closed=False)
    n1 = Nr - n2 - n3
    return Decomposition(n1, n2, n3, split)


# -- both sides of the substitution rule ----------------------------------


def _composite_measure(M: MonotoneFn, N: MonotoneFn) -> LSMeasure:
    return measure_from(compose(N, M))


def _range_measure(M: MonotoneFn, N: MonotoneFn) -> LSMeasure:
    """Measure of ``N`` restricted to ``[M(lo), M(hi)]``."""
    ylo, yhi = M.range
    if ylo == yhi:
        return LSMeasure.build(ylo, yhi)
    return measure_from(N.restrict(ylo, yhi) if (ylo, yhi) != N.domain else N)


def cov_lhs(f: PiecewiseFn, M: MonotoneFn, N: MonotoneFn) -> Fraction:
    """``int f(x) dN(M(x))``, read as the integral against ``N o M``."""
    return integrate(f, _composite_measure(M, N))


def cov_rhs(f: PiecewiseFn, M: MonotoneFn, N: MonotoneFn, side: str = "left") -> RhsTerms:
    """The three terms of the mass-splitting formula.

    ``term_n1`` integrates ``f`` of the chosen inverse (``"left"`` for X,
    ``"right"`` for Xi) against the part of ``N`` without jumps at flat
    levels; ``term_minus`` puts each left jump on ``f(X(y))`` and
    ``term_plus`` each right jump on ``f(Xi(y))``.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    H = flat_levels(M)
    if H.span[0] == H.span[1]:
        # constant M: the range is a point and carries no mass
        z = Fraction(0)
        return RhsTerms(z, z, z)
    dec = decompose(N, H)
    W = left_inverse(M) if side == "left" else right_inverse(M)
    term_n1 = integrate(compose_with_monotone(f, W), measure_from(dec.n1))
    term_minus = Fraction(0)
    term_plus = Fraction(0)
    for lv, j in zip(H, dec.split):
        term_minus += f(lv.x_left) * j.delta_minus
        term_plus += f(lv.x_right) * j.delta_plus
    return RhsTerms(term_n1, term_minus, term_plus)


def _pullback_integral(f: PiecewiseFn, W: MonotoneFn, nu: LSMeasure) -> Fraction:
    return integrate(compose_with_monotone(f, W), nu)


def _flat_violations(N: MonotoneFn, M: MonotoneFn, which: str) -> list[Fraction]:
    """Flat levels at which ``N`` lacks the required continuity."""
    H = flat_levels(M)
    bad = []
    for j in jump_split(N, H):
        if which in ("right", "both") and j.delta_plus != 0:
            bad.append(j.y)
        elif which in ("left", "both") and j.delta_minus != 0:
            bad.append(j.y)
    return bad


def _interval_mismatch(M, N, side: str, probes) -> list[dict]:
    """Compare composite masses with pulled-back masses at ``probes``.

    For ``side="left"`` the intervals are ``[lo, x]`` against preimages under
    X; for ``"right"`` they are ``[x, hi]`` against preimages under Xi.
    """
    lam = _composite_measure(M, N)
    nu = _range_measure(M, N)
    out = []
    for x in probes:
        x = exact(x)
        if side == "left":
            a = mass(lam, M.lo, x)
            b = preimage_mass(nu, M, x)
        else:
            a = mass(lam, x, M.hi)
            b = upper_preimage_mass(nu, M, x)
        out.append(
            {"x": float(x), "composite_mass": float(a), "preimage_mass": float(b),
             "difference": float(b - a)}
        )
    return out


def verify_identity(
    tag: str,
    fn: PiecewiseFn,
    M: MonotoneFn,
    N: MonotoneFn,
    theta=Fraction(0),
    tol: float = DEFAULT_TOL,
    force: bool = False,
    side: str = "left",
    probes=None,
) -> VerificationReport:
    """Evaluate both sides of one of the substitution identities.

    ``fn`` plays the role of ``f`` (on the domain of ``M``) for ``eq1``,
    ``eq3``, ``eq4`` and ``eq5`` and of ``g`` (on the range of ``M``) for
    ``eq2`` and ``eq6``.

    ``eq3``/``eq4`` need ``N`` right/left continuous at every flat level of
    ``M``, ``eq1`` needs it continuous there, and ``eq2`` needs ``M``
    continuous.  A violated hypothesis raises :class:`PreconditionError`
    unless ``force`` is set, in which case the report is produced anyway and
    lists the violations.  Forced ``eq3``/``eq4`` reports also carry interval
    mass comparisons at ``probes`` (default: the midpoints of the flats).
    """
    if tag not in IDENTITY_TAGS:
        raise ValueError(f"unknown identity tag {tag!r}; expected one of {IDENTITY_TAGS}")
    violations: list[str] = []

    def require(bad: list[Fraction], what: str):
        if not bad:
            return
        msg = f"{tag}: N is not {what} at flat level y={float(bad[0])}"
        if not force:
            raise PreconditionError(msg, level=bad[0])
        violations.extend(
            f"N is not {what} at flat level y={float(y)}" for y in bad
        )

    report = None
    if tag == "eq5":
        lhs = cov_lhs(fn, M, N)
        t = cov_rhs(fn, M, N, side)
        report = VerificationReport(
            tag, lhs,
            [("n1_integral", t.term_n1), ("left_jumps", t.term_minus), ("right_jumps", t.term_plus)],
            tol,
        )
    elif tag == "eq6":
        f = compose_with_monotone(fn, M)
        lhs = cov_lhs(f, M, N)
        t = cov_rhs(f, M, N, side)
        report = VerificationReport(
            tag, lhs,
            [("n1_integral", t.term_n1), ("left_jumps", t.term_minus), ("right_jumps", t.term_plus)],
            tol,
        )
    elif tag in ("eq3", "eq4", "eq1"):
        which = {"eq3": "right", "eq4": "left", "eq1": "both"}[tag]
        what = {"right": "right-continuous", "left": "left-continuous", "both": "continuous"}[which]
        require(_flat_violations(N, M, which), what)
        lhs = cov_lhs(fn, M, N)
        nu = _range_measure(M, N)
        if M.range[0] == M.range[1]:
            rhs = Fraction(0)
        elif tag == "eq3":
            rhs = _pullback_integral(fn, left_inverse(M), nu)
        elif tag == "eq4":
            rhs = _pullback_integral(fn, right_inverse(M), nu)
        else:
            rhs = _pullback_integral(fn, selector_inverse(M, theta), nu)
        name = {"eq3": "left_inverse_integral", "eq4": "right_inverse_integral",
                "eq1": "selector_inverse_integral"}[tag]
        report = VerificationReport(tag, lhs, [(name, rhs)], tol)
        if tag == "eq1":
            report.details["theta"] = float(exact(theta))
        if force and tag in ("eq3", "eq4"):
            if probes is None:
                probes = [(lv.x_left + lv.x_right) / 2 for lv in flat_levels(M)]
            report.details["interval_mismatch"] = _interval_mismatch(
                M, N, "left" if tag == "eq3" else "right", probes
            )
    elif tag == "eq2":
        if not M.is_continuous():
            bad = next(b.x for b in M.breakpoints if b.is_jump)
            msg = f"eq2: M is not continuous at x={float(bad)}"
            if not force:
                raise PreconditionError(msg, level=bad)
            violations.append(msg)
        lhs = cov_lhs(compose_with_monotone(fn, M), M, N)
        rhs = integrate(fn, _range_measure(M, N))
        report = VerificationReport(tag, lhs, [("range_integral", rhs)], tol)
    report.forced = force and bool(violations)
    report.violations = violations
    return report


def check_inequalities(
    fn: PiecewiseFn,
    M: MonotoneFn,
    N: MonotoneFn,
    decreasing: bool = False,
    tol: float = 1e-12,
) -> list[VerificationReport]:
    """Monotone-integrand inequalities between the composite and pulled-back integrals.

    ``fn`` must be increasing (or decreasing when ``decreasing`` is set).
    When it is defined on the domain of ``M`` it is used as ``f`` for the
    two-sided bound ``int f(X) dN <= int f d(N o M) <= int f(Xi) dN``
    (``ineq7``, two reports).  When it is defined on the range of ``M`` it
    is used as ``g``: ``ineq8`` (``M`` left continuous,
    ``int g(M) d(N o M) <= int g dN``) and ``ineq9`` (``M`` right continuous,
    the reverse) are reported when their hypothesis holds.  For decreasing
    ``fn`` every relation is flipped.
    """
    ok = fn.is_decreasing() if decreasing else fn.is_increasing()
    if not ok:
        raise ValueError(
            f"integrand is not {'decreasing' if decreasing else 'increasing'} on its domain"
        )
    h = -fn if decreasing else fn
    flip = {"<=": ">=", ">=": "<="}
    sign = -1 if decreasing else 1

    def report(tag, bound, lhs_h, rhs_name, rhs_h, relation):
        # slack is evaluated on h, values are reported for fn
        r = VerificationReport(
            tag, sign * lhs_h, [(rhs_name, sign * rhs_h)], tol,
            relation=flip[relation] if decreasing else relation,
        )
        if bound:
            r.details["bound"] = bound
        return r

    out = []
    ylo, yhi = M.range
    nu = _range_measure(M, N)
    degenerate = ylo == yhi
    if h.lo <= M.lo and M.hi <= h.hi:
        lhs = cov_lhs(h, M, N)
        lower = Fraction(0) if degenerate else _pullback_integral(h, left_inverse(M), nu)
        upper = Fraction(0) if degenerate else _pullback_integral(h, right_inverse(M), nu)
        out.append(report("ineq7", "lower", lhs, "left_inverse_integral", lower, ">="))
        out.append(report("ineq7", "upper", lhs, "right_inverse_integral", upper, "<="))
    if h.lo <= ylo and yhi <= h.hi:
        lhs = cov_lhs(compose_with_monotone(h, M), M, N)
        rhs = integrate(h, nu)
        if M.is_left_continuous():
            out.append(report("ineq8", None, lhs, "range_integral", rhs, "<="))
        if M.is_right_continuous():
            out.append(report("ineq9", None, lhs, "range_integral", rhs, ">="))
    if not out:
        raise DomainError("integrand domain covers neither the domain nor the range of M")
    return out
