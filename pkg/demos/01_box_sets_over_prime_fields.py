"""Box sets on the line F_p and how fast they fill up.

Box(E) collects ||x - y|| + ||x - z|| over x, y, z in E with y != z. On the
line the norm is a square, so every box value is a sum of two squares. When
p = 3 mod 4, -1 is not a square and a^2 + b^2 = 0 forces a = b = 0, which
means y = z = x. So 0 never appears, no matter how large E is. This script
shows that, then runs the threshold sweep at the first prime where
sqrt(18) p^(3/4) <= p.
"""

import numpy as np

from boxlab.ff import PointSet, box_set, distance_set, pinned_box_set
from boxlab.harness import ExperimentConfig, box_threshold, ff_box_threshold_sweep

E = PointSet.from_points(7, 1, [0, 1, 3])
print("E =", list(E))
print("distance set       ", distance_set(E).values())
print("box set            ", box_set(E).values())
print("pinned box set at 0", pinned_box_set(E, [0]).values())

# which residues are missing once E is the whole line?
for p in (5, 7, 11, 13, 17, 19):
    B = box_set(PointSet.full(p, 1))
    missing = sorted(set(range(p)) - set(B.values()))
    print(f"p={p:2d} (p mod 4 = {p % 4})  Box(F_p) misses {missing}")

# exact small-field picture: fraction of subsets of each size whose box set is full
cfg = ExperimentConfig("box-sweep", {"p": "5,7,11", "sizes": "all", "samples": 1, "mode": "exhaustive"}, seed=0)
table = ff_box_threshold_sweep(cfg)
print()
print(table.body_csv())

p = 331
print(f"threshold at p={p}: {box_threshold(p):.2f}")
cfg = ExperimentConfig("box-sweep", {"p": str(p), "sizes": "300,320,329:331", "samples": 20}, seed=42)
table = ff_box_threshold_sweep(cfg)
for row in table.rows:
    size, full, nonzero = row[2], row[5], row[6]
    print(f"|E|={size}: full box set in {full:.0%} of samples, every nonzero value in {nonzero:.0%}")

# a random set well below the threshold already covers every nonzero value
rng = np.random.default_rng(1)
small = PointSet.random(p, 1, 60, rng)
print("size 60 box set has", len(box_set(small)), "of", p, "values")
