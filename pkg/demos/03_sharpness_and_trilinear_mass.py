"""Euclidean experiments on dyadic grids.

First, neighbourhoods of radius q^(-1/s) around the lattice {k/q} in [0, 1].
For s < 1/2 their box sets shrink like q^(2 - 1/s). Second, the trilinear mass
of a Cantor set of dimension 0.84: the product mass of triples whose box value
falls in [t - eps, t + eps], which should scale at least linearly in eps.
"""

from boxlab.euclid import box_counting_dimension, cantor_set, lattice_neighborhood
from boxlab.harness import ExperimentConfig, sharpness_resolution, sharpness_sweep, trilinear_scaling

for q in (4, 8, 16):
    n = sharpness_resolution(q, 0.4, 1)
    E = lattice_neighborhood(q, 0.4, 1, n)
    print(f"q={q:2d}: radius {q ** -2.5:.2e}, grid 2^-{n}, {len(E)} cells")

for s in (0.4, 0.6):
    table = sharpness_sweep(ExperimentConfig("sharpness", {"s": s, "q": "2,4,8,16,32"}, seed=0))
    print(f"\ns={s}: measures", [round(m, 4) for m in table.column("measure")])
    print(f"      fitted slope {table.column('slope')[0]:.3f}, predicted {table.column('predicted_slope')[0]:.3f}")

C = cantor_set(0.84, 1, 12)
print(f"\nCantor set s=0.84 at 2^-12: {len(C)} cells, box-counting slope {box_counting_dimension(C, range(2, 11)):.3f}")
cfg = ExperimentConfig("trilinear", {"s": 0.84, "n": 12, "t": 1.0,
                                     "eps": "2^-4,2^-5,2^-6,2^-7,2^-8,2^-9"}, seed=0)
table = trilinear_scaling(cfg)
for eps, mass in zip(table.column("eps"), table.column("mass")):
    print(f"eps={eps:.5f}  mass={mass:.5f}")
print("log-log slope", round(table.column("slope")[0], 3))
