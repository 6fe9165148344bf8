"""The eps-subdifferential of |x| at 1 and its Lipschitz behaviour in eps."""

from convexdiff import PWLConvexFunction, eps_subdiff, eps_subdiff_oracle, lipschitz_probe

f = PWLConvexFunction([((1,), 0), ((-1,), 0)])
for eps in ["0", "1/2", "1", "2", "3"]:
    D = eps_subdiff(f, (1,), eps)
    lo, hi = D.vertices[0][0], D.vertices[-1][0]
    print(f"eps = {eps:>3}: [{lo}, {hi}]  oracle accepts ends:",
          eps_subdiff_oracle(f, (1,), eps, (lo,)) and eps_subdiff_oracle(f, (1,), eps, (hi,)))

L_emp, L_bound, violations = lipschitz_probe(f, (1,), 1, "1/2", n=200, seed=0)
print(f"on [1/2, 3/2]: L_emp = {L_emp:.4f}, L_bound = {L_bound:.4f}, violations = {violations}")

# a planar example with four pieces
g = PWLConvexFunction([((1, 0), 0), ((0, 1), 0), ((-1, -1), 0), (("1/2", "1/2"), "1/4")])
for eps in ["0", "1/4", "1"]:
    print(f"D({eps}) at the origin:", eps_subdiff(g, (0, 0), eps))
