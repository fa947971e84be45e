import hypothesis
import numpy as np
import pytest
from pydantic import ValidationError

from morphsample.errors import (
    CeilingMismatchError,
    DimensionMismatchError,
    NotSampledError,
    ValueRangeError,
)
from morphsample.grid import (
    BinaryImage,
    GreyImage,
    Sieve,
    first_difference,
    first_le_violation,
    ge,
    images_equal,
    le,
    reflect,
    reflect_image,
    restrict,
    restrict_binary,
    translate,
)

from strategies import binary_images, grey_images


def test_binary_image_is_cropped_to_its_bounding_box():
    mask = np.array([[0, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=bool)
    a = BinaryImage(mask)
    assert a.origin == (1, 1)
    assert a.shape == (2, 2)
    assert a == BinaryImage.from_points([(1, 1), (2, 2)])


def test_binary_image_membership_and_bbox():
    a = BinaryImage.from_points([(0, 0), (2, 1)])
    assert len(a) == 2
    assert (2, 1) in a
    assert (1, 1) not in a
    assert a.bbox == ((0, 0), (2, 1))
    assert list(a) == [(0, 0), (2, 1)]


def test_empty_sets_compare_equal_regardless_of_construction():
    assert BinaryImage(np.zeros((3, 3), dtype=bool), (5, 5)) == BinaryImage.empty(2)
    assert BinaryImage.empty(2).bbox is None


def test_from_points_needs_a_dimension_for_empty_input():
    with pytest.raises(DimensionMismatchError):
        BinaryImage.from_points([])
    assert BinaryImage.from_points([], dim=3).dim == 3


def test_set_operators():
    a = BinaryImage.from_points([(0, 0), (0, 1)])
    b = BinaryImage.from_points([(0, 1), (5, 5)])
    assert a | b == BinaryImage.from_points([(0, 0), (0, 1), (5, 5)])
    assert a & b == BinaryImage.from_points([(0, 1)])
    assert a - b == BinaryImage.from_points([(0, 0)])
    assert a & b <= a
    assert not a <= b


def test_grey_image_rejects_values_outside_the_ceiling():
    with pytest.raises(ValueRangeError):
        GreyImage(np.array([[0, 16]]), ceiling=15)
    with pytest.raises(ValueRangeError):
        GreyImage(np.array([[-1]]))
    # off-domain cells are ignored
    GreyImage(np.array([[3, 99]]), np.array([[True, False]]), ceiling=15)


def test_grey_image_values_and_domain():
    f = GreyImage.from_mapping({(0, 0): 3, (0, 1): 5}, ceiling=15)
    assert f.value((0, 1)) == 5
    assert f.value((1, 1)) is None
    assert f.domain == BinaryImage.from_points([(0, 0), (0, 1)])
    assert f.max_value() == 5
    assert f.min_value() == 3
    assert f.to_mapping() == {(0, 0): 3, (0, 1): 5}


def test_equality_includes_the_ceiling():
    f = GreyImage.from_mapping({(0, 0): 3}, ceiling=15)
    assert f != f.with_ceiling(255)
    assert f == GreyImage.from_mapping({(0, 0): 3}, ceiling=15)


def test_sieve_membership():
    s = Sieve(spacing=(2, 3))
    assert s.contains((2, -3))
    assert s.contains((0, 0))
    assert not s.contains((1, 0))
    assert not s.contains((0, 2))


@pytest.mark.parametrize("spacing", [(), (0, 2), (2, -1)])
def test_sieve_rejects_bad_spacing(spacing):
    with pytest.raises(ValidationError):
        Sieve(spacing=spacing)


def test_restrict_keeps_original_coordinates(sieve2):
    f = GreyImage(np.arange(16).reshape(4, 4), ceiling=15)
    sampled = restrict(f, sieve2)
    assert sampled.to_mapping() == {(0, 0): 0, (0, 2): 2, (2, 0): 8, (2, 2): 10}
    assert sieve2.is_sampled(sampled)
    assert not sieve2.is_sampled(f)


def test_restrict_with_unit_spacing_is_identity():
    f = GreyImage(np.arange(6).reshape(2, 3), ceiling=15)
    assert restrict(f, Sieve(spacing=(1, 1))) == f


def test_compact_divides_coordinates(sieve2):
    f = GreyImage(np.arange(16).reshape(4, 4), ceiling=15, origin=(-2, 0))
    small = sieve2.compact(restrict(f, sieve2))
    assert small.origin == (-1, 0)
    assert small.values.tolist() == [[0, 2], [8, 10]]
    with pytest.raises(NotSampledError):
        sieve2.compact(f)


def test_first_difference_reports_both_sides():
    f = GreyImage.from_mapping({(0, 0): 1, (0, 1): 4}, ceiling=15)
    g = GreyImage.from_mapping({(0, 0): 0}, ceiling=15)
    assert first_difference(f, g) == ((0, 0), 1, 0)
    assert first_le_violation(f, g) == ((0, 0), 1, 0)
    h = GreyImage.from_mapping({(0, 0): 5}, ceiling=15)
    assert first_le_violation(f, h) == ((0, 1), 4, None)
    assert first_le_violation(g, f) is None
    assert le(g, f)
    assert ge(f, g)
    assert not images_equal(f, g)
    assert images_equal(f, GreyImage.from_mapping({(0, 1): 4, (0, 0): 1}, ceiling=15))


def test_comparisons_need_equal_ceilings():
    f = GreyImage.from_mapping({(0, 0): 1}, ceiling=15)
    with pytest.raises(CeilingMismatchError):
        le(f, f.with_ceiling(255))


@hypothesis.given(binary_images())
def test_reflect_is_an_involution(a):
    assert reflect(reflect(a)) == a


@hypothesis.given(grey_images())
def test_reflect_image_is_an_involution(f):
    assert reflect_image(reflect_image(f)) == f


@hypothesis.given(binary_images(), binary_images())
def test_union_is_commutative(a, b):
    assert a | b == b | a


@hypothesis.given(binary_images())
def test_translate_round_trip(a):
    assert translate(translate(a, (3, -2)), (-3, 2)) == a


@hypothesis.given(binary_images())
def test_restrict_binary_is_idempotent(a):
    s = Sieve(spacing=(2, 2))
    once = restrict_binary(a, s)
    assert restrict_binary(once, s) == once
    assert once <= a
