import hypothesis
import pytest

from morphsample.elements import builtin
from morphsample.errors import CeilingMismatchError, DimensionMismatchError, EmptyStructuringElementError
from morphsample.grey_morph import (
    clamp_free,
    closing_clamp_free,
    closing_duality_check,
    dilation_adjunction_check,
    duality_domain,
    gclose,
    gclose_oracle,
    gdilate,
    gerode,
    gopen,
    gopen_oracle,
    negative,
    opening_clamp_free,
)
from morphsample.grid import BinaryImage, GreyImage, le

from strategies import CEILING, flat_elements, grey_images, small_filters


def _row(values, ceiling=255):
    return GreyImage.from_mapping({(0, i): v for i, v in enumerate(values)}, ceiling)


def _flat_row(width, ceiling=255):
    r = width // 2
    return GreyImage.constant(BinaryImage.from_points([(0, i) for i in range(-r, r + 1)]), 0, ceiling)


def test_flat_dilation_takes_the_neighbourhood_max():
    f = GreyImage.from_mapping({(0, 0): 3, (1, 0): 5}, 255)
    k = GreyImage.constant(BinaryImage.from_points([(-1, 0), (0, 0), (1, 0)]), 0, 255)
    out = gdilate(f, k)
    assert out.to_mapping() == {(-1, 0): 3, (0, 0): 5, (1, 0): 5, (2, 0): 5}


def test_flat_erosion_takes_the_neighbourhood_min():
    out = gerode(_row([3, 5, 4]), _flat_row(3))
    assert out.to_mapping() == {(0, 1): 3}


def test_non_flat_dilation_adds_offsets(k2):
    f = GreyImage.from_mapping({(0, 0): 50}, 255)
    out = gdilate(f, k2)
    assert out.value((0, 0)) == 50
    assert out.value((1, 1)) == 60
    assert len(out) == 9


def test_dilation_saturates_at_the_ceiling():
    k = GreyImage.from_mapping({(0, 0): 0, (0, 1): 10}, 255)
    out = gdilate(GreyImage.from_mapping({(0, 0): 250}, 255), k)
    assert out.to_mapping() == {(0, 0): 250, (0, 1): 255}


def test_erosion_clamps_at_zero_or_drops_the_point():
    f = _row([3, 3])
    k = GreyImage.from_mapping({(0, 0): 0, (0, 1): 5}, 255)
    assert gerode(f, k).to_mapping() == {(0, 0): 0}
    assert gerode(f, k, extend=False).is_empty


def test_operands_must_share_ceiling_and_dimension(k2):
    with pytest.raises(CeilingMismatchError):
        gdilate(_row([1], ceiling=15), k2)
    with pytest.raises(DimensionMismatchError):
        gdilate(GreyImage.from_mapping({(0,): 1}, 255), k2)


def test_erosion_by_empty_element_raises():
    with pytest.raises(EmptyStructuringElementError):
        gerode(_row([1, 2]), GreyImage.empty(2, 255))


@pytest.mark.parametrize("op", [gdilate, gopen, gclose])
def test_dilation_based_ops_reject_an_empty_element(op):
    f = GreyImage.constant(BinaryImage.centered_box(1), 3, 15)
    with pytest.raises(EmptyStructuringElementError):
        op(f, GreyImage.empty(2, 15))


def test_dilating_an_empty_image_is_empty(k2):
    assert gdilate(GreyImage.empty(2, 255), k2).is_empty


def test_negative_reflects_values():
    assert negative(_row([0, 10, 255])).to_mapping() == {(0, 0): 255, (0, 1): 245, (0, 2): 0}


def test_clamp_free_margin(k2):
    assert clamp_free(_row([20, 200]), k2, k2)
    assert not clamp_free(_row([19, 200]), k2, k2)
    assert not clamp_free(_row([20, 236]), k2, k2)


def test_exact_clamp_premises_with_k2_at_a_low_ceiling():
    k = builtin("k2", 15)
    flat = GreyImage.constant(BinaryImage.box((5, 5)), 12, 15)
    assert not clamp_free(flat, k, k)
    # erosion gives 2 on the 3x3 interior and dilation brings it back to 12
    assert opening_clamp_free(flat, k)
    assert not closing_clamp_free(flat, k)
    low = GreyImage.constant(BinaryImage.box((5, 5)), 3, 15)
    assert closing_clamp_free(low, k)
    assert not opening_clamp_free(low, k)


def test_umbra_oracles_agree_with_k2_when_nothing_clamps():
    k = builtin("k2", 15)
    flat = GreyImage.constant(BinaryImage.box((5, 5)), 12, 15)
    assert gopen(flat, k) == flat
    assert gopen_oracle(flat, k) == gopen(flat, k)
    low = GreyImage.constant(BinaryImage.box((5, 5)), 3, 15)
    assert gclose(low, k) == low
    assert gclose_oracle(low, k) == gclose(low, k)


def test_duality_domain_is_the_deep_interior(flat3):
    f = GreyImage.constant(BinaryImage.box((5, 5)), 7, 255)
    assert duality_domain(f, flat3) == BinaryImage.from_points([(2, 2)])


def test_closing_duality_fails_off_the_interior_only():
    # closing gives 0 at x=1 near the border, the dual gives 5; the interior is empty
    f = _row([0, 0, 5, 5, 5])
    k = _flat_row(3)
    assert gclose(f, k).value((0, 1)) == 0
    assert closing_duality_check(f, k)


@hypothesis.given(grey_images(), flat_elements())
def test_flat_opening_is_anti_extensive_and_idempotent(f, k):
    opened = gopen(f, k)
    assert le(opened, f)
    assert gopen(opened, k) == opened


@hypothesis.given(grey_images(), flat_elements())
def test_flat_closing_is_extensive_and_idempotent(f, k):
    closed = gclose(f, k)
    assert le(f, closed)
    assert gclose(closed, k) == closed


@hypothesis.given(grey_images(), small_filters())
def test_closing_is_dual_to_opening_of_the_negative(f, k):
    assert closing_duality_check(f, k)


@hypothesis.given(grey_images(), flat_elements(), grey_images())
def test_dilation_erosion_adjunction(h, k, f):
    # h (+) k <= f  <=>  h <= f (-) k
    assert dilation_adjunction_check(h, k, f)


@hypothesis.given(grey_images(low=4, high=CEILING - 4, min_size=1), small_filters(), small_filters())
def test_dilation_is_commutative_and_associative(f, k, c):
    assert gdilate(f, k) == gdilate(k, f)
    assert gdilate(gdilate(f, k), c) == gdilate(f, gdilate(k, c))
