"""Grey-scale morphology with non-flat structuring elements.

Values are clamped to [0, l]: dilation saturates at the ceiling and erosion at
zero. Dilation agrees exactly with the umbra construction. Erosion is extended
to every point of F (-) K; the slab (umbra) reading leaves points with a
negative minimum undefined, available here through ``extend=False``.
"""

from __future__ import annotations

import logging

import numpy as np

from .errors import EmptyStructuringElementError
from .grid import (
    BinaryImage,
    GreyImage,
    check_ceilings,
    check_dims,
    first_difference,
    le,
    reflect,
    reflect_image,
)
from .binary_morph import bdilate, berode
from .umbra import top_surface, uclose_tilde, umbra, uopen_union

logger = logging.getLogger(__name__)

_LOW = np.iinfo(np.int64).min // 4
_HIGH = np.iinfo(np.int64).max // 4


def _check(f: GreyImage, k: GreyImage) -> int:
    dim = check_dims(f.dim, k.dim)
    check_ceilings(f.ceiling, k.ceiling)
    return dim


def gdilate(f: GreyImage, k: GreyImage) -> GreyImage:
    """(f (+) k)(x) = min(l, max{f(x - z) + k(z)}) on F (+) K.

    Raises:
        EmptyStructuringElementError: if k has an empty domain.
    """
    dim = _check(f, k)
    if k.is_empty:
        raise EmptyStructuringElementError("grey dilation by an empty structuring element")
    if f.is_empty:
        return GreyImage.empty(dim, f.ceiling)
    shape = tuple(a + b - 1 for a, b in zip(f.shape, k.shape))
    acc = np.full(shape, _LOW, dtype=np.int64)
    src = np.where(f.mask, f.values, _LOW)
    for j in np.argwhere(k.mask):
        view = acc[tuple(slice(i, i + n) for i, n in zip(j, f.shape))]
        np.maximum(view, src + k.values[tuple(j)], out=view)
    mask = acc > _LOW // 2
    origin = tuple(p + q for p, q in zip(f.origin, k.origin))
    return GreyImage(np.minimum(acc, f.ceiling), mask, origin, f.ceiling)


def gerode(f: GreyImage, k: GreyImage, extend: bool = True) -> GreyImage:
    """(f (-) k)(x) = max(0, min{f(x + z) - k(z)}) on F (-) K.

    With ``extend=False`` points whose minimum is negative are dropped from the
    domain instead of being clamped to zero.

    Raises:
        EmptyStructuringElementError: if k has an empty domain.
    """
    dim = _check(f, k)
    if k.is_empty:
        raise EmptyStructuringElementError("grey erosion by an empty structuring element")
    if f.is_empty:
        return f
    shape = tuple(a - b + 1 for a, b in zip(f.shape, k.shape))
    if any(n <= 0 for n in shape):
        return GreyImage.empty(dim, f.ceiling)
    acc = np.full(shape, _HIGH, dtype=np.int64)
    mask = np.ones(shape, dtype=bool)
    for j in np.argwhere(k.mask):
        window = tuple(slice(i, i + n) for i, n in zip(j, shape))
        mask &= f.mask[window]
        np.minimum(acc, f.values[window] - k.values[tuple(j)], out=acc)
    if not extend:
        mask &= acc >= 0
    origin = tuple(p - q for p, q in zip(f.origin, k.origin))
    return GreyImage(np.maximum(acc, 0), mask, origin, f.ceiling)


def gopen(f: GreyImage, k: GreyImage) -> GreyImage:
    """(f (-) k) (+) k."""
    return gdilate(gerode(f, k), k)


def gclose(f: GreyImage, k: GreyImage) -> GreyImage:
    """(f (+) k) (-) k."""
    return gerode(gdilate(f, k), k)


def negative(f: GreyImage) -> GreyImage:
    """(-f)(x) = l - f(x) on F."""
    if f.is_empty:
        return f
    return GreyImage(f.ceiling - f.values, f.mask, f.origin, f.ceiling)


def clamp_free(f: GreyImage, *ses: GreyImage) -> bool:
    """True when no clamp can bind while applying ``ses`` in sequence to f.

    A sufficient margin test over value ranges; ``opening_clamp_free`` and
    ``closing_clamp_free`` decide the exact premise for one element.
    """
    margin = sum(se.max_value() for se in ses)
    if f.is_empty:
        return True
    return f.min_value() >= margin and f.max_value() + margin <= f.ceiling


def _dilation_fits(f: GreyImage, k: GreyImage) -> bool:
    # the unclamped maximum of f (+) k is max f + max k
    return f.is_empty or f.max_value() + k.max_value() <= f.ceiling


def _erosion_fits(f: GreyImage, k: GreyImage) -> bool:
    return gerode(f, k, extend=False).domain == gerode(f, k).domain


def opening_clamp_free(f: GreyImage, k: GreyImage) -> bool:
    """No value of f (-) k is clamped at 0 and none of (f (-) k) (+) k at l."""
    _check(f, k)
    return _erosion_fits(f, k) and _dilation_fits(gerode(f, k), k)


def closing_clamp_free(f: GreyImage, k: GreyImage) -> bool:
    """No value of f (+) k is clamped at l and none of (f (+) k) (-) k at 0."""
    _check(f, k)
    return _dilation_fits(f, k) and _erosion_fits(gdilate(f, k), k)


def gopen_oracle(f: GreyImage, k: GreyImage) -> GreyImage:
    """Opening through the umbra: top surface of the union of fitting translates."""
    _check(f, k)
    if k.is_empty:
        raise EmptyStructuringElementError("opening by an empty structuring element")
    if f.is_empty:
        return f
    return top_surface(uopen_union(umbra(f), umbra(k)))


def gclose_oracle(f: GreyImage, k: GreyImage) -> GreyImage:
    """Closing through the umbra: complement of the reflected translates missing U[f].

    Agrees with ``gclose`` when ``closing_clamp_free(f, k)`` holds.
    """
    _check(f, k)
    if k.is_empty:
        raise EmptyStructuringElementError("closing by an empty structuring element")
    if f.is_empty:
        return f
    reach = bdilate(bdilate(f.domain, k.domain), reflect(k.domain))
    window = BinaryImage.box(reach.shape, reach.origin)
    return top_surface(uclose_tilde(umbra(f), umbra(k), window))


def duality_domain(f: GreyImage, k: GreyImage) -> BinaryImage:
    """Points of F whose whole (K (+) K-reflected) neighbourhood lies in F."""
    return berode(f.domain, bdilate(k.domain, reflect(k.domain)))


def closing_duality_check(f: GreyImage, k: GreyImage) -> bool:
    """f . k = -((-f) o k-reflected), compared where neither side meets the border of F."""
    interior = duality_domain(f, k)
    lhs = _on(gclose(f, k), interior)
    rhs = _on(negative(gopen(negative(f), reflect_image(k))), interior)
    return first_difference(lhs, rhs) is None


def _on(f: GreyImage, domain: BinaryImage) -> GreyImage:
    if f.is_empty or domain.is_empty:
        return GreyImage.empty(f.dim, f.ceiling)
    return GreyImage(f.values, f.mask & domain.mask_in(f.origin, f.shape), f.origin, f.ceiling)


def dilation_adjunction_check(h: GreyImage, k: GreyImage, f: GreyImage) -> bool:
    """h (+) k <= f  <=>  h <= f (-) k."""
    return le(gdilate(h, k), f) == le(h, gerode(f, k))
