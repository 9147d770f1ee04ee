"""Sphere Fourier coefficients, hinge counts and the O2 counting inequality in F_p^2.

The transform is normalized as f_hat(m) = p^-2 sum_x chi(-x.m) f(x). For
circles of nonzero radius the coefficients stay below 2 p^(-3/2). The zero
circle is different: when p = 1 mod 4 it is a pair of lines, and on those
lines the coefficient is (p - 1)/p^2, which beats the bound once p >= 13.
"""

import numpy as np

from boxlab.ff import PointSet, error_term, hinge_count, nu_square_inequality, orthogonal_group2
from boxlab.ff.spectral import error_terms, weil_salie_scan

for p in (7, 11, 13, 17, 29, 31):
    scan = weil_salie_scan(p)
    nonzero = max(r for t, r in scan if t != 0)
    print(f"p={p:2d}  worst ratio over t != 0: {nonzero:.3f}   at t = 0: {scan[0][1]:.3f}")

rng = np.random.default_rng(0)
E = PointSet.random(7, 3, 49, rng)
print("\nhinge counts in F_7^3, |E| = 49")
for rep in error_terms(E):
    print(f"t={rep.t}  hinge={rep.hinge:6d}  main={float(rep.main_term):8.1f}  D={rep.D:8.1f}  bound={rep.bound:8.1f}")
assert hinge_count(E, 3) == error_term(E, 3).hinge

print("\n|O2(F_p)| for small p:", {p: len(orthogonal_group2(p)) for p in (3, 5, 7, 11, 13)})
for p in (7, 11):
    A = PointSet.random(p, 2, p * p // 3, rng)
    B = PointSet.random(p, 2, p * p // 2, rng)
    r = nu_square_inequality(A, B)
    print(f"p={p}: sum nu^2 = {r.lhs}  <=  {r.rhs}  ({r.satisfied})")

# the same inequality breaks for p = 1 mod 4 on an isotropic line
p, i = 13, 5
line = [(k, (i * k) % p) for k in range(p)]
r = nu_square_inequality(PointSet.from_points(p, 2, line[:7]), PointSet.from_points(p, 2, line[6:]))
print(f"p=13 isotropic halves: {r.lhs} vs {r.rhs} -> holds: {r.satisfied}")
