"""Minimal elements of a triangle minus its base edge, drawn as SVG.

Run from any directory; the picture is written next to this script.
"""

from fractions import Fraction
from pathlib import Path

from convexdiff import Polytope, make, minimal_element, render_svg

A = Polytope([(0, 0), (1, 0), ("1/2", 1)])
B = Polytope([(0, 0), (1, 0)])
C = make(A, B)

reports = []
for k in range(8):
    rep = minimal_element(C, (1, Fraction(2 * k - 7, 16)), 64)
    reports.append(rep)
    print(f"selector {tuple(map(str, rep.selector))}: {rep.element}  exact minimal: {rep.exact_minimal}")

out = Path(__file__).with_name("triangle_minus_edge.svg")
out.write_text(render_svg([(A, "A"), (B, "B")] + [(r, f"Z{i}") for i, r in enumerate(reports)],
                          labels=True))
print("wrote", out)
