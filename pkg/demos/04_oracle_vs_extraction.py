"""Brute-force candidates against the cutting sweep."""

from convexdiff import Polytope, contains_set, make, minimal_element, minimal_oracle, scale
from convexdiff.geometry import direction_grid

X = Polytope([(0, 0), (3, 1), (1, 2)])

# X / (1/2)X has the single minimal element (1/2)X
C = make(X, scale(X, "1/2"))
print("oracle:", minimal_oracle(C, 8, 6))
print("sweep: ", minimal_element(C, (1, 0), 32).element)

# the triangle-minus-edge example has a whole family
A = Polytope([(0, 0), (1, 0), ("1/2", 1)])
B = Polytope([(0, 0), (1, 0)])
cands = minimal_oracle(make(A, B), 8, 6)
print(f"{len(cands)} oracle candidates on the ladder:")
for Z in cands:
    print("  ", Z)
for p in direction_grid(4, 2, 0.2):
    Z = minimal_element(make(A, B), p, 64).element
    beaten = any(contains_set(K, Z) and K != Z for K in cands)
    print(f"selector {tuple(round(float(c), 3) for c in p)}: {Z}  strictly contains a candidate: {beaten}")
