"""Norm brackets for formal differences."""

from convexdiff import Polytope, collection_norm, make, norm

X = Polytope([(0, 0), (3, 1), (1, 2)])
O = Polytope([(0, 0)])
print("|X|             =", norm(X))
print("|X / 0| bracket =", tuple(collection_norm(make(X, O), 8, 64)))
print("|0 / X| bracket =", tuple(collection_norm(make(O, X), 8, 64)))

A = Polytope([(0, 0), (1, 0), ("1/2", 1)])
B = Polytope([(0, 0), (1, 0)])
b = collection_norm(make(A, B), 8, 64)
print(f"|A / B| lies in [{b.lower:.6f}, {b.upper:.6f}] over {len(b.elements)} extractions")
