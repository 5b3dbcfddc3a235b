"""Left and right generalized inverses of a function with a jump and a flat."""

from stieltjes import MonotoneFn, left_inverse, right_inverse, selector_inverse

# jump at x = 1 (from 1 to 2), flat at level 3 on [2, 3]
M = MonotoneFn([(0, 0, 0, 0), (1, 1, 1, 2), (2, 3, 3, 3), (3, 3, 3, 3), (4, 4, 4, 4)])

X = left_inverse(M)
Xi = right_inverse(M)
W = selector_inverse(M, 0.5)

# inside the gap (1, 2) both inverses are constant at the jump location
# at the flat level y = 3 they disagree: X picks the left end, Xi the right end
for y in (0.5, 1, 1.5, 2, 2.5, 3, 3.5):
    print(f"y={y:<4} X={float(X(y)):<6} Xi={float(Xi(y)):<6} W(1/2)={float(W(y))}")

# X is left-continuous, Xi right-continuous
print("X left-continuous:", X.is_left_continuous())
print("Xi right-continuous:", Xi.is_right_continuous())

# applying M after the inverse lands back on y wherever y is a value of M
for y in (0.5, 3, 3.5):
    print(y, float(M(X(y))), float(M(Xi(y))))
