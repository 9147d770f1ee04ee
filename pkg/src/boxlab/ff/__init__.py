"""Finite-field distance and box-set machinery over F_p^d (p an odd prime)."""

from .core import (
    OrthMatrix2,
    PrimeModulus,
    character,
    is_prime,
    norm,
    orthogonal_group2,
    sphere,
)
from .distance import (
    box_set,
    counting_function,
    distance_set,
    joint_counting_function,
    joint_distance_set,
    pinned_box_set,
    pinned_distance_set,
    product_with_diagonal,
    split_halves,
)
from .pointset import Histogram, PointSet, ScalarSet
from .spectral import (
    ErrorTermReport,
    NuSquareReport,
    SpectrumTable,
    error_term,
    fourier_transform,
    hinge_count,
    inverse_transform,
    lambda_table,
    nu_square_inequality,
    sphere_fourier,
    sphere_fourier_max,
    weil_salie_bound,
)
