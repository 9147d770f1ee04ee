"""Interval arithmetic for pinned sum sets, chain lengths and perimeters.

Pinning x, the squared box values over a separated pair E1, E2 are exactly
the sum set of the squared pinned distance sets of E1 and E2, so the union
contains an interval as long as each piece does. Chains pinned at x are
handled the same way, and their total lengths come out of a unit-Jacobian
projection of the chain boxes.
"""

from boxlab.euclid import (
    GridSet,
    box_set_approx,
    cantor_set,
    chain_length_set,
    chain_set,
    contained_interval,
    dyadic_separation,
    minkowski_sum,
    perimeter_set,
    pinned_dist_squared_set,
    project_boxes,
    sum_projection_matrix,
)

E = cantor_set(0.7, 1, 9)
E1, E2, sep = dyadic_separation(E)
print(f"{len(E)} cells split into {len(E1)} and {len(E2)}, separation {sep:.3f}")

x = [0.05]
D1, D2 = pinned_dist_squared_set(E1, x), pinned_dist_squared_set(E2, x)
S = minkowski_sum(D1, D2)
print("pinned pieces:", len(D1), "and", len(D2), "components; sum set:", len(S), "components")
print("longest interval in the sum set:", contained_interval(S))
print("inside the pinned box set:", S.issubset(box_set_approx(E, E1, E2, pin=x, root=False), slack=2 * E.delta))

U = box_set_approx(E, E1, E2)
print(f"\nfull box set: measure {U.measure():.4f} in {len(U)} components")
U1 = box_set_approx(E, E1, E2, p=1.0)
print(f"two-link chain lengths (l^1): measure {U1.measure():.4f}")

F = cantor_set(0.7, 1, 6)
for k in (1, 2, 3):
    L = chain_length_set(F, [0.0], k)
    P = project_boxes(chain_set(F, [0.0], k), sum_projection_matrix(k))
    print(f"k={k}: chain lengths {L}, projection agrees: {L.isclose(P, atol=1e-12)}")

T = GridSet.from_points([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.5, 0.5]], 5)
print("\nperimeters of the four-point set:", perimeter_set(T))
