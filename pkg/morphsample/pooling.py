"""Generalized max-pooling: sampling by a non-flat filter and its reconstructions.

sigma(f) = (f (+) k)|S pools, sigma_dot(g) = g . k reconstructs, and the two
form an adjunction. rho = sigma_dot o sigma and delta(f) = sigma(f) (+) k.
With a flat square k and a matching spacing, sigma is ordinary max-pooling
kept at the original coordinates.
"""

from __future__ import annotations

import logging
from functools import partial

from .errors import NotSampledError
from .grey_morph import gclose, gdilate, gerode, gopen
from .grid import GreyImage, check_ceilings, le, restrict
from .sampling import FilterSpec, bound_chain, equality, relation_report
from .types import RelationReport

logger = logging.getLogger(__name__)


def sigma(f: GreyImage, spec: FilterSpec) -> GreyImage:
    """The sampling operator (f (+) k)|S."""
    spec.require_valid()
    return restrict(gdilate(f, spec.k), spec.sieve)


def sigma_dot(g: GreyImage, spec: FilterSpec) -> GreyImage:
    """The reconstructing operator g . k for g living on the sieve.

    Raises:
        NotSampledError: if the domain of g leaves the sieve.
    """
    spec.require_valid()
    if not spec.sieve.is_sampled(g):
        raise NotSampledError("sigma_dot needs an image whose domain lies on the sieve")
    return gclose(g, spec.k)


def rho(f: GreyImage, spec: FilterSpec) -> GreyImage:
    """Pool then reconstruct: sigma_dot(sigma(f))."""
    return sigma_dot(sigma(f, spec), spec)


def delta(f: GreyImage, spec: FilterSpec) -> GreyImage:
    """Pool then dilate: sigma(f) (+) k."""
    return gdilate(sigma(f, spec), spec.k)


def adjunction_check(f: GreyImage, g: GreyImage, spec: FilterSpec) -> bool:
    """sigma(f) <= g  <=>  f <= sigma_dot(g)."""
    check_ceilings(f.ceiling, g.ceiling, spec.ceiling)
    return le(sigma(f, spec), g) == le(f, sigma_dot(g, spec))


def sampled_filter(c: GreyImage, spec: FilterSpec) -> GreyImage:
    """Validate a structuring element that lives on the sieve (c = c|S).

    Raises:
        NotSampledError: if C has points off the sieve.
    """
    if not spec.sieve.is_sampled(c):
        raise NotSampledError("the structuring element c must lie on the sieve")
    check_ceilings(c.ceiling, spec.ceiling)
    return c


def h2_relations(f: GreyImage, c: GreyImage, spec: FilterSpec) -> RelationReport:
    """How sigma and rho interact with morphology by a sieve-supported c.

    I is an exact equality; II-VIII are chains of <=.
    """
    sampled_filter(c, spec)
    spec.require_valid()
    k = spec.k
    name = "h2_relations"
    s_ = partial(sigma, spec=spec)
    r_ = partial(rho, spec=spec)
    fk = gdilate(f, k)
    results = [
        equality(f"{name}.I", s_(gdilate(f, c)), gdilate(s_(f), c)),
        bound_chain(f"{name}.II", s_(gerode(f, c)), gerode(s_(f), c), s_(gerode(fk, c))),
        bound_chain(f"{name}.III", s_(gopen(f, c)), gopen(s_(f), c), s_(gopen(fk, c))),
        bound_chain(f"{name}.IV", s_(gclose(f, c)), gclose(s_(f), c), s_(gclose(fk, c))),
        bound_chain(f"{name}.V", gdilate(r_(f), c), r_(gdilate(f, c))),
        bound_chain(f"{name}.VI", r_(gerode(f, c)), gerode(r_(f), c), r_(gerode(fk, c))),
        bound_chain(f"{name}.VII", gopen(r_(f), c), r_(gopen(fk, c))),
        bound_chain(f"{name}.VIII", gclose(r_(f), c), r_(gclose(fk, c))),
    ]
    return relation_report(name, results)


def reconstruction_fixpoint(f: GreyImage, spec: FilterSpec) -> bool:
    """Sampling the reconstruction of sigma(f) gives sigma(f) back."""
    pooled = sigma(f, spec)
    return restrict(sigma_dot(pooled, spec), spec.sieve) == pooled


def rho_is_idempotent(f: GreyImage, spec: FilterSpec) -> bool:
    """Exploratory: does rho(rho(f)) equal rho(f) for this f?"""
    once = rho(f, spec)
    twice = rho(once, spec)
    if twice != once:
        logger.debug(f"rho is not idempotent on {f!r}")
    return twice == once
