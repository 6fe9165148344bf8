"""Arithmetic on formal differences X / Y."""

from convexdiff import Polytope, gmp, is_equivalent, is_zero, make

A = Polytope([(0, 0), (1, 0), ("1/2", 1)])
B = Polytope([(0, 0), (1, 0)])
C = make(A, B)

for p in [(1, 0), (0, 1), (-1, 0), (0, -1)]:
    print(f"support of A / B at {p}: {gmp.support(C, p)}")

# adding the same set on both sides does not change the difference
print("A / B ~ (A + B) / (B + B):", is_equivalent(C, make(A + B, B + B)))

# the inverse cancels, the negative multiple does not
print("C + C.inverse() is zero:", is_zero(C + C.inverse()))
print("C + (-1) C is zero:     ", is_zero(C + gmp.scale(C, -1)))
