"""Where does the jump of N go when M is flat?

M rises from 0 to 1 on [0, 1], stays at 1 on [1, 2], then rises to 2 on
[2, 3].  N is the identity plus a jump at y = 1 (N(1-) = 1, N(1) = 1.5,
N(1+) = 2).  Composing collapses the flat of M onto the single level
y = 1, so the jump of N turns into two atoms of N(M(x)): one at the left
end of the flat and one at the right end.
"""

from stieltjes import (
    MonotoneFn,
    PiecewiseFn,
    compose,
    cov_rhs,
    decompose,
    flat_levels,
    integrate,
    measure_from,
    verify_identity,
)

M = MonotoneFn.continuous([0, 1, 2, 3], [0, 1, 1, 2])
N = MonotoneFn([(0, 0, 0, 0), (1, 1, 1.5, 2), (2, 3, 3, 3)])
f = PiecewiseFn.identity(0, 3)

print("flat levels of M:", [(float(lv.y), float(lv.x_left), float(lv.x_right))
                            for lv in flat_levels(M)])

L = compose(N, M)
lam = measure_from(L)
print("atoms of d(N o M):", [(float(x), float(m)) for x, m in lam.atoms])

# the split of the jump at y = 1: the left half sits at x = 1, the right half at x = 2
dec = decompose(N, flat_levels(M))
for j in dec.split:
    print(f"jump at y={float(j.y)}: left part {float(j.delta_minus)}, right part {float(j.delta_plus)}")

print("int f d(N o M) =", float(integrate(f, lam)))
for side in ("left", "right"):
    terms = cov_rhs(f, M, N, side=side)
    print(f"  split form with the {side} inverse:", [float(t) for t in terms], "->", float(terms.total))

rep = verify_identity("eq5", f, M, N)
print("residual:", float(rep.residual), "pass:", rep.passed)
