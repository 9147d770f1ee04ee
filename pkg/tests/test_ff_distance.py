import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxlab.errors import CapacityError, DegenerateInputError, StructuralError
from boxlab.ff import (
    Histogram,
    PointSet,
    ScalarSet,
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

from oracles import naive_box_set, naive_distance, naive_pinned_box_set


def line(p, *xs):
    return PointSet.from_points(p, 1, xs)


@st.composite
def point_sets(draw, primes=(3, 5, 7, 11, 13), dims=(1, 2), max_size=30):
    p = draw(st.sampled_from(primes))
    d = draw(st.sampled_from(dims))
    seed = draw(st.integers(0, 2**32 - 1))
    size = draw(st.integers(0, min(max_size, p**d)))
    return PointSet.random(p, d, size, np.random.default_rng(seed))


# containers


def test_pointset_roundtrip_text(tmp_path):
    E = PointSet.random(7, 2, 12, np.random.default_rng(0))
    assert PointSet.from_text(E.to_text()) == E
    path = tmp_path / "e.txt"
    E.save(path)
    assert PointSet.load(path) == E
    assert path.read_text().splitlines()[0] == "7 2 12"


@given(point_sets(dims=(1, 2, 3)))
def test_pointset_text_roundtrip_property(E):
    assert PointSet.from_text(E.to_text()) == E


def test_pointset_text_rejects_bad_card():
    with pytest.raises(ValueError):
        PointSet.from_text("7 1 3\n0\n1\n")


def test_pointset_membership_and_algebra():
    A = PointSet.from_points(5, 2, [(0, 0), (1, 2)])
    B = PointSet.from_points(5, 2, [(1, 2), (3, 3)])
    assert (1, 2) in A and (3, 3) not in A
    assert (A | B).card == 3 and (A & B).card == 1 and (A - B).card == 1
    assert not A.isdisjoint(B)
    assert (A & B).issubset(A)
    with pytest.raises(StructuralError):
        A | PointSet.empty(5, 1)


def test_pointset_encoding_first_coordinate_most_significant():
    E = PointSet.from_points(5, 2, [(1, 3)])
    assert list(E.indices()) == [1 * 5 + 3]
    assert E.grid()[1, 3]


def test_random_pointset_size_and_determinism():
    a = PointSet.random(11, 2, 40, np.random.default_rng(3))
    b = PointSet.random(11, 2, 40, np.random.default_rng(3))
    assert a == b and a.card == 40


def test_capacity_error_for_products():
    E = PointSet.from_points(8191, 2, [(0, 0)])
    with pytest.raises(CapacityError):
        product_with_diagonal(E, E, E)


# distance sets


def test_distance_set_examples():
    assert distance_set(PointSet.empty(7, 1)) == set()
    assert distance_set(line(7, 0, 1, 3)) == {0, 1, 2, 4}
    assert distance_set(PointSet.full(7, 1)) == {0, 1, 2, 4}


def test_pinned_distance_set_examples():
    assert pinned_distance_set(line(7, 4), [4]) == {0}
    assert pinned_distance_set(line(7, 0, 1, 3), [0]) == {0, 1, 2}
    assert pinned_distance_set(PointSet.empty(7, 1), [0]) == set()
    # the pin need not belong to E
    assert pinned_distance_set(line(7, 1), [0]) == {1}


def test_joint_distance_set_examples():
    A = PointSet.from_points(5, 2, [(0, 0), (1, 2)])
    B = PointSet.from_points(5, 2, [(1, 1)])
    assert joint_distance_set(A, B) == {1, 2}
    assert joint_distance_set(A, PointSet.empty(5, 2)) == set()
    x = PointSet.from_points(5, 2, [(2, 4)])
    assert joint_distance_set(x, x) == {0}
    with pytest.raises(StructuralError):
        joint_distance_set(A, PointSet.empty(7, 2))


@given(point_sets())
@settings(max_examples=60)
def test_distance_set_matches_naive(E):
    pts = list(E)
    expect = {naive_distance(x, y, E.p) for x in pts for y in pts}
    assert distance_set(E) == expect


# box sets


def test_box_set_examples():
    assert box_set(PointSet.empty(5, 1)) == set()
    assert box_set(line(5, 2)) == set()
    assert box_set(line(5, 0, 1)) == {1}
    E = line(7, 0, 1, 3)
    B = box_set(E)
    assert 3 in B
    assert B == naive_box_set(list(E), 7)


def test_pinned_box_set_examples():
    assert pinned_box_set(line(7, 0, 1, 2), [0]) == {1, 4, 5}
    assert pinned_box_set(line(7, 3), [0]) == set()
    assert pinned_box_set(line(5, 0, 1), [0]) == {1}


@given(point_sets(max_size=14))
@settings(max_examples=80)
def test_box_set_matches_naive(E):
    assert box_set(E) == naive_box_set(list(E), E.p)
    assert box_set(E, stop_when_full=False) == box_set(E)


@given(point_sets(max_size=14), st.data())
@settings(max_examples=60)
def test_pinned_box_set_matches_naive(E, data):
    x = data.draw(st.tuples(*[st.integers(0, E.p - 1)] * E.d))
    assert pinned_box_set(E, x) == naive_pinned_box_set(list(E), E.p, x)


@pytest.mark.parametrize("p", [7, 11, 331])
def test_zero_never_a_box_value_when_minus_one_is_a_nonsquare(p):
    # a^2 + b^2 = 0 has only the trivial solution, which forces y = z
    B = box_set(PointSet.full(p, 1))
    assert set(range(p)) - set(B.values()) == {0}


@pytest.mark.parametrize("p", [5, 13])
def test_full_line_box_set_is_everything_when_minus_one_is_a_square(p):
    assert box_set(PointSet.full(p, 1)).is_full()


@given(point_sets(primes=(5, 7, 11, 13), max_size=20), st.data())
@settings(max_examples=60)
def test_sum_set_identity(E, data):
    """Unrestricted pinned sums are the sum-set of the pinned distance set; with y != z it contains E1 + E2 sums."""
    p = E.p
    x = data.draw(st.tuples(*[st.integers(0, p - 1)] * E.d))
    D = pinned_distance_set(E, x).values()
    sumset = {(a + b) % p for a in D for b in D}
    assert naive_pinned_box_set(list(E), p, x, distinct=False) == sumset
    if E.card >= 2:
        E1, E2 = split_halves(E, data.draw(st.integers(0, 1000)))
        D1, D2 = pinned_distance_set(E1, x).values(), pinned_distance_set(E2, x).values()
        restricted = pinned_box_set(E, x)
        assert {(a + b) % p for a in D1 for b in D2} <= set(restricted.values())


@given(point_sets(max_size=20), st.integers(0, 2**32 - 1))
@settings(max_examples=60)
def test_monotonicity(E, seed):
    rng = np.random.default_rng(seed)
    keep = rng.random(E.card) < 0.6
    F = PointSet.from_indices(E.p, E.d, E.indices()[keep])
    assert F.issubset(E)
    assert distance_set(F).issubset(distance_set(E))
    assert box_set(F).issubset(box_set(E))


# counting functions


def test_counting_function_examples():
    h = counting_function(line(7, 0, 1, 3), [0])
    assert h.as_dict() == {0: 1, 1: 1, 2: 1} and h.total() == 3
    assert counting_function(PointSet.empty(7, 1), [0]).total() == 0


@given(point_sets(dims=(1, 2, 3)), st.data())
@settings(max_examples=60)
def test_counting_function_total(E, data):
    x = data.draw(st.tuples(*[st.integers(0, E.p - 1)] * E.d))
    assert counting_function(E, x).total() == E.card


def test_joint_counting_function_examples():
    A = PointSet.from_points(3, 2, [(0, 0)])
    B = PointSet.from_points(3, 2, [(1, 1)])
    assert joint_counting_function(A, B).as_dict() == {2: 1}
    assert joint_counting_function(A, A).as_dict() == {0: 1}


@given(point_sets(), st.integers(0, 2**32 - 1))
@settings(max_examples=40)
def test_joint_counting_total(A, seed):
    B = PointSet.random(A.p, A.d, min(5, A.p**A.d), np.random.default_rng(seed))
    h = joint_counting_function(A, B)
    assert h.total() == A.card * B.card
    assert h.support() == joint_distance_set(A, B)


def test_histogram_rejects_negative():
    with pytest.raises(ValueError):
        Histogram(3, [1, -1, 0])


def test_scalar_set_equality():
    assert ScalarSet.from_values(7, [1, 8]) == {1}


# halves and products


def test_split_halves():
    E = PointSet.random(11, 1, 10, np.random.default_rng(1))
    E1, E2 = split_halves(E, 5)
    assert (E1.card, E2.card) == (5, 5)
    assert E1.isdisjoint(E2) and (E1 | E2) == E
    assert split_halves(E, 5) == (E1, E2)
    odd = PointSet.random(11, 1, 7, np.random.default_rng(2))
    assert sorted(h.card for h in split_halves(odd, 0)) == [3, 4]
    with pytest.raises(DegenerateInputError):
        split_halves(line(11, 3), 0)


def test_product_with_diagonal_example():
    A, B = product_with_diagonal(line(5, 0), line(5, 1), line(5, 2))
    assert list(A) == [(0, 1)] and list(B) == [(2, 2)]
    assert A.d == 2


@given(point_sets(primes=(5, 7), dims=(1,), max_size=7), st.integers(0, 100))
@settings(max_examples=60)
def test_joint_set_of_product_lies_in_box_set(E, seed):
    if E.card < 2:
        return
    E1, E2 = split_halves(E, seed)
    A, B = product_with_diagonal(E1, E2, E)
    assert A.card == E1.card * E2.card and B.card == E.card
    assert joint_distance_set(A, B).issubset(box_set(E))
