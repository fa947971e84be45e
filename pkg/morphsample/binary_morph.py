"""Binary dilation, erosion, opening and closing by finite structuring elements."""

from __future__ import annotations

import itertools
import logging

import numpy as np

from .errors import EmptyStructuringElementError, PreconditionError
from .grid import (
    BinaryImage,
    check_dims,
    is_subset,
    reflect,
    set_difference,
    set_intersection,
    translate,
)

logger = logging.getLogger(__name__)


def bdilate(a: BinaryImage, b: BinaryImage) -> BinaryImage:
    """A (+) B = {a + b : a in A, b in B}. Empty if either operand is."""
    dim = check_dims(a.dim, b.dim)
    if a.is_empty or b.is_empty:
        return BinaryImage.empty(dim)
    shape = tuple(sa + sb - 1 for sa, sb in zip(a.shape, b.shape))
    out = np.zeros(shape, dtype=bool)
    for j in np.argwhere(b.mask):
        window = tuple(slice(i, i + n) for i, n in zip(j, a.shape))
        out[window] |= a.mask
    return BinaryImage(out, tuple(p + q for p, q in zip(a.origin, b.origin)))


def berode(a: BinaryImage, b: BinaryImage) -> BinaryImage:
    """A (-) B = {x : B_x is a subset of A}.

    Raises:
        EmptyStructuringElementError: if B is empty.
    """
    dim = check_dims(a.dim, b.dim)
    if b.is_empty:
        raise EmptyStructuringElementError("erosion by an empty structuring element")
    if a.is_empty:
        return a
    shape = tuple(sa - sb + 1 for sa, sb in zip(a.shape, b.shape))
    if any(n <= 0 for n in shape):
        return BinaryImage.empty(dim)
    out = np.ones(shape, dtype=bool)
    for j in np.argwhere(b.mask):
        out &= a.mask[tuple(slice(i, i + n) for i, n in zip(j, shape))]
    return BinaryImage(out, tuple(p - q for p, q in zip(a.origin, b.origin)))


def bopen(a: BinaryImage, b: BinaryImage) -> BinaryImage:
    """A o B = (A (-) B) (+) B."""
    return bdilate(berode(a, b), b)


def bclose(a: BinaryImage, b: BinaryImage) -> BinaryImage:
    """A . B = (A (+) B) (-) B."""
    return berode(bdilate(a, b), b)


def bcomplement(a: BinaryImage, window: BinaryImage) -> BinaryImage:
    """Complement of A relative to a finite window W."""
    return set_difference(window, a)


def _box_points(lo, hi):
    return itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi)))


def bopen_oracle(a: BinaryImage, b: BinaryImage) -> BinaryImage:
    """Opening as the union of translates B_y that fit inside A."""
    dim = check_dims(a.dim, b.dim)
    if b.is_empty:
        raise EmptyStructuringElementError("opening by an empty structuring element")
    if a.is_empty:
        return a
    inside = a.points
    b_pts = b.points
    (alo, ahi), (blo, bhi) = a.bbox, b.bbox
    covered: set = set()
    for y in _box_points(
        tuple(p - q for p, q in zip(alo, blo)), tuple(p - q for p, q in zip(ahi, bhi))
    ):
        shifted = {tuple(u + v for u, v in zip(p, y)) for p in b_pts}
        if shifted <= inside:
            covered |= shifted
    return BinaryImage.from_points(covered, dim)


def bclose_oracle(a: BinaryImage, b: BinaryImage) -> BinaryImage:
    """Closing as the points x whose every reflected translate meets A.

    x belongs to the closing iff each reflected translate of B that contains
    x also intersects A. Candidates range over the box of A (+) B (+) B-reflected.
    """
    dim = check_dims(a.dim, b.dim)
    if b.is_empty:
        raise EmptyStructuringElementError("closing by an empty structuring element")
    if a.is_empty:
        return a
    inside = a.points
    b_pts = b.points
    reach = bdilate(bdilate(a, b), reflect(b))
    lo, hi = reach.bbox
    kept = []
    for x in _box_points(lo, hi):
        # reflected translates through x are y - B with y = x + b
        ok = True
        for p in b_pts:
            y = tuple(u + v for u, v in zip(x, p))
            if not any(tuple(u - v for u, v in zip(y, q)) in inside for q in b_pts):
                ok = False
                break
        if ok:
            kept.append(x)
    return BinaryImage.from_points(kept, dim)


def duality_check(a: BinaryImage, b: BinaryImage, window: BinaryImage) -> bool:
    """Erosion/dilation complement duality, evaluated inside a window.

    Compares (A (-) B)^c with A^c (+) B-reflected on the interior W (-) B, the
    points whose neighbourhood never leaves W.

    Raises:
        PreconditionError: if W does not contain A (+) B-reflected.
    """
    if not is_subset(bdilate(a, reflect(b)), window):
        raise PreconditionError("duality window must contain A (+) reflect(B)")
    interior = berode(window, b)
    lhs = set_difference(interior, berode(a, b))
    rhs = set_intersection(bdilate(bcomplement(a, window), reflect(b)), interior)
    return lhs == rhs


def open_close_duality_check(a: BinaryImage, b: BinaryImage, window: BinaryImage) -> bool:
    """(A . B)^c = A^c o B-reflected on the interior W (-) (B (+) B-reflected).

    Raises:
        PreconditionError: if W does not contain A (+) reflect(B).
    """
    if not is_subset(bdilate(a, reflect(b)), window):
        raise PreconditionError("duality window must contain A (+) reflect(B)")
    interior = berode(window, bdilate(b, reflect(b)))
    lhs = set_difference(interior, bclose(a, b))
    rhs = set_intersection(bopen(bcomplement(a, window), reflect(b)), interior)
    return lhs == rhs


def dilation_adjunction_check(x: BinaryImage, b: BinaryImage, a: BinaryImage) -> bool:
    """X (+) B within A  <=>  X within A (-) B."""
    return is_subset(bdilate(x, b), a) == is_subset(x, berode(a, b))


def bdilate_translate_check(a: BinaryImage, b: BinaryImage, x) -> bool:
    """Dilation commutes with translation: A_x (+) B = (A (+) B)_x."""
    return bdilate(translate(a, x), b) == translate(bdilate(a, b), x)
