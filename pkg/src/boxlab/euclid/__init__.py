"""Discretized Euclidean experiments on dyadic grids."""

from .grid import (
    DiscreteMeasure,
    GridSet,
    box_counting_dimension,
    cantor_intervals,
    cantor_ratio,
    cantor_set,
    dyadic_separation,
    lattice_neighborhood,
)
from .intervals import IntervalUnion, contained_interval, minkowski_sum, union_all
from .sets import (
    box_set_approx,
    chain_length_set,
    chain_set,
    joint_distance_histogram,
    perimeter_set,
    pinned_dist_squared_set,
    project_boxes,
    sum_projection_matrix,
    triangle_side_boxes,
    trilinear_mass,
)
