"""Covering difference, erosion, and the reflected intersection form."""

from convexdiff import Polytope, compare_intersection_forms, cover_diff, erode_diff

square = Polytope([(0, 0), (2, 0), (2, 2), (0, 2)])
bar = Polytope([(0, 0), (1, 0)])

# z + bar fits inside the square: a 1 x 2 rectangle of translations
print("erode_diff(square, bar) =", erode_diff(square, bar))

# a small triangle covered by translates of a large one
tri = Polytope([(0, 0), ("1/2", 0), (0, "1/2")])
big = Polytope([(0, 0), (3, 0), (0, 3)])
D = cover_diff(tri, big)
print("cover_diff(tri, big)   =", D)

# intersecting Y - x instead of x - Y mirrors the result through the origin
cmp = compare_intersection_forms(tri, big)
print("reflected form         =", cmp["reflected"])
print("forms agree:", cmp["agree"], " witness point:", tuple(map(str, cmp["witness"])))
