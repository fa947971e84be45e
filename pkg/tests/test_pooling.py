import numpy as np
import pytest

from morphsample.elements import builtin
from morphsample.errors import InvalidFilterError, NotSampledError
from morphsample.grid import BinaryImage, GreyImage, le
from morphsample.pooling import (
    adjunction_check,
    delta,
    h2_relations,
    reconstruction_fixpoint,
    rho,
    rho_is_idempotent,
    sampled_filter,
    sigma,
    sigma_dot,
)
from morphsample.sampling import FilterSpec


def test_sigma_with_a_flat_box_is_overlapping_max_pooling(flat_spec):
    f = GreyImage(np.arange(16).reshape(4, 4), ceiling=255)
    pooled = sigma(f, flat_spec)
    assert pooled.to_mapping() == {
        (0, 0): 5, (0, 2): 7, (0, 4): 7,
        (2, 0): 13, (2, 2): 15, (2, 4): 15,
        (4, 0): 13, (4, 2): 15, (4, 4): 15,
    }
    assert flat_spec.sieve.compact(pooled).values.tolist() == [[5, 7, 7], [13, 15, 15], [13, 15, 15]]


def test_sigma_dot_needs_a_sampled_image(flat_spec):
    with pytest.raises(NotSampledError):
        sigma_dot(GreyImage(np.ones((2, 2), dtype=int), ceiling=255), flat_spec)


def test_sigma_dot_rejects_an_identity_only_filter(sieve2):
    spec = FilterSpec.build(GreyImage.from_mapping({(0, 0): 0}, 255), sieve2)
    g = GreyImage.from_mapping({(0, 0): 4, (0, 2): 9}, 255)
    assert sieve2.is_sampled(g)
    with pytest.raises(InvalidFilterError):
        sigma_dot(g, spec)
    with pytest.raises(InvalidFilterError):
        rho(g, spec)


@pytest.mark.parametrize("spec_name", ["flat_spec", "k2_spec"])
def test_rho_sits_between_the_image_and_delta(spec_name, full_image, request):
    spec = request.getfixturevalue(spec_name)
    f = full_image()
    assert le(f, rho(f, spec))
    assert le(rho(f, spec), delta(f, spec))


def test_sigma_and_sigma_dot_are_adjoint(k2_spec, full_image):
    f, other = full_image(), full_image()
    assert adjunction_check(f, sigma(f, k2_spec), k2_spec)
    assert adjunction_check(f, sigma(other, k2_spec), k2_spec)


def test_reconstruction_fixpoint(k2_spec, full_image):
    assert reconstruction_fixpoint(full_image(), k2_spec)


def test_h2_relations_with_a_flat_sieve_element(flat_spec, full_image):
    c = GreyImage.constant(BinaryImage.from_points([(0, 0), (0, 2), (2, 0), (-2, 0), (0, -2)]), 0, 255)
    report = h2_relations(full_image(), c, flat_spec)
    assert report.status == "pass", report.render()
    assert len(report.results) == 8


def test_h2_relations_with_non_flat_filters(k2_spec, full_image):
    report = h2_relations(full_image(), builtin("c2"), k2_spec)
    assert report.status == "pass", report.render()


def test_sieve_elements_must_lie_on_the_sieve(flat_spec, flat3):
    with pytest.raises(NotSampledError):
        sampled_filter(flat3, flat_spec)


def test_rho_is_idempotent_on_a_constant_image(flat_spec):
    f = GreyImage.constant(BinaryImage.box((10, 10)), 50, 255)
    assert rho_is_idempotent(f, flat_spec)
