"""Bounds for monotone integrands when the jump split is unknown.

If f is increasing, putting all of a jump of N on the left end of a flat
gives a lower bound and putting it on the right end gives an upper bound.
"""

from stieltjes import MonotoneFn, PiecewiseFn, check_inequalities

M = MonotoneFn.continuous([0, 1, 2, 3], [0, 1, 1, 2])
N = MonotoneFn([(0, 0, 0, 0), (1, 1, 1.5, 2), (2, 3, 3, 3)])

for r in check_inequalities(PiecewiseFn.identity(0, 3), M, N):
    print(r.tag, r.details.get("bound", ""), float(r.lhs), r.relation, float(r.rhs_total))

# a decreasing integrand flips the bounds
for r in check_inequalities(-PiecewiseFn.identity(0, 3), M, N, decreasing=True):
    print(r.tag, r.details.get("bound", ""), float(r.lhs), r.relation, float(r.rhs_total))
