"""Points, finite domains and grey images on the integer grid E^N.

Both image types store a dense numpy array over their bounding box plus the
integer coordinate of that box's lowest corner. Constructors crop to the
tight bounding box and zero values outside the domain, so two images that
describe the same function compare equal structurally.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from .errors import (
    CeilingMismatchError,
    DimensionMismatchError,
    NotSampledError,
    ValueRangeError,
)

logger = logging.getLogger(__name__)

Point = tuple[int, ...]

DEFAULT_CEILING = 255


def _point(coords: Iterable[int]) -> Point:
    return tuple(int(c) for c in coords)


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _tight_window(mask: np.ndarray) -> tuple[Point, tuple[slice, ...]] | None:
    """Offset and slices of the bounding box of ``mask``, or None if empty."""
    if not mask.any():
        return None
    hits = np.nonzero(mask)
    lo = tuple(int(axis.min()) for axis in hits)
    hi = tuple(int(axis.max()) + 1 for axis in hits)
    return lo, tuple(slice(a, b) for a, b in zip(lo, hi))


def check_dims(*dims: int) -> int:
    if len(set(dims)) > 1:
        raise DimensionMismatchError(f"grid dimensions differ: {sorted(set(dims))}")
    return dims[0]


def check_ceilings(*ceilings: int) -> int:
    if len(set(ceilings)) > 1:
        raise CeilingMismatchError(f"grey ceilings differ: {sorted(set(ceilings))}")
    return ceilings[0]


def embed(
    array: np.ndarray,
    origin: Point,
    frame_origin: Point,
    frame_shape: tuple[int, ...],
    fill,
) -> np.ndarray:
    """Copy ``array`` (anchored at ``origin``) into a frame filled with ``fill``.

    Parts of ``array`` falling outside the frame are dropped.
    """
    out = np.full(frame_shape, fill, dtype=array.dtype)
    src, dst = [], []
    for o, n, fo, fn in zip(origin, array.shape, frame_origin, frame_shape):
        start = max(o, fo)
        stop = min(o + n, fo + fn)
        if stop <= start:
            return out
        src.append(slice(start - o, stop - o))
        dst.append(slice(start - fo, stop - fo))
    out[tuple(dst)] = array[tuple(src)]
    return out


def union_frame(*boxes: tuple[Point, tuple[int, ...]]) -> tuple[Point, tuple[int, ...]]:
    """Smallest frame (origin, shape) holding every non-empty (origin, shape) box."""
    boxes = tuple(b for b in boxes if all(n > 0 for n in b[1]))
    if not boxes:
        raise ValueError("union_frame needs at least one non-empty box")
    dim = len(boxes[0][0])
    lo = tuple(min(b[0][i] for b in boxes) for i in range(dim))
    hi = tuple(max(b[0][i] + b[1][i] for b in boxes) for i in range(dim))
    return lo, tuple(h - l for l, h in zip(lo, hi))


class BinaryImage:
    """A finite subset of E^N."""

    __slots__ = ("_origin", "_mask")

    def __init__(self, mask: np.ndarray, origin: Sequence[int] | None = None):
        mask = np.asarray(mask, dtype=bool)
        if mask.ndim == 0:
            raise DimensionMismatchError("images need at least one axis")
        origin = _point(origin) if origin is not None else (0,) * mask.ndim
        if len(origin) != mask.ndim:
            raise DimensionMismatchError(
                f"origin {origin} does not match a {mask.ndim}-dimensional mask"
            )
        window = _tight_window(mask)
        if window is None:
            self._origin: Point = (0,) * mask.ndim
            self._mask = _readonly(np.zeros((0,) * mask.ndim, dtype=bool))
        else:
            offset, slices = window
            self._origin = tuple(o + d for o, d in zip(origin, offset))
            self._mask = _readonly(mask[slices].copy())

    @classmethod
    def empty(cls, dim: int) -> BinaryImage:
        return cls(np.zeros((0,) * dim, dtype=bool))

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]], dim: int | None = None) -> BinaryImage:
        """Build a set from explicit coordinates.

        Raises:
            DimensionMismatchError: if points disagree on dimension, or the
                set is empty and ``dim`` is not given.
        """
        pts = [_point(p) for p in points]
        if not pts:
            if dim is None:
                raise DimensionMismatchError("cannot infer the dimension of an empty point set")
            return cls.empty(dim)
        check_dims(*(len(p) for p in pts), *(() if dim is None else (dim,)))
        coords = np.array(pts, dtype=np.int64)
        lo = coords.min(axis=0)
        mask = np.zeros(tuple(coords.max(axis=0) - lo + 1), dtype=bool)
        mask[tuple((coords - lo).T)] = True
        return cls(mask, lo)

    @classmethod
    def box(cls, shape: Sequence[int], origin: Sequence[int] | None = None) -> BinaryImage:
        return cls(np.ones(tuple(shape), dtype=bool), origin)

    @classmethod
    def centered_box(cls, radius: int, dim: int = 2) -> BinaryImage:
        """The box {-radius..radius}^dim."""
        return cls.box((2 * radius + 1,) * dim, (-radius,) * dim)

    @property
    def dim(self) -> int:
        return self._mask.ndim

    @property
    def origin(self) -> Point:
        return self._origin

    @property
    def mask(self) -> np.ndarray:
        return self._mask

    @property
    def shape(self) -> tuple[int, ...]:
        return self._mask.shape

    @property
    def is_empty(self) -> bool:
        return self._mask.size == 0

    @property
    def bbox(self) -> tuple[Point, Point] | None:
        """Inclusive (lowest, highest) corners, or None for the empty set."""
        if self.is_empty:
            return None
        return self._origin, tuple(o + n - 1 for o, n in zip(self._origin, self.shape))

    @property
    def points(self) -> frozenset[Point]:
        return frozenset(self)

    def mask_in(self, origin: Point, shape: tuple[int, ...]) -> np.ndarray:
        """This set as a boolean mask over the frame (origin, shape)."""
        return embed(self._mask, self._origin, origin, shape, False)

    def __iter__(self) -> Iterator[Point]:
        for idx in np.argwhere(self._mask):
            yield tuple(int(o + i) for o, i in zip(self._origin, idx))

    def __len__(self) -> int:
        return int(self._mask.sum())

    def __contains__(self, x: object) -> bool:
        if not isinstance(x, tuple) or len(x) != self.dim or self.is_empty:
            return False
        idx = tuple(c - o for c, o in zip(x, self._origin))
        if any(i < 0 or i >= n for i, n in zip(idx, self.shape)):
            return False
        return bool(self._mask[idx])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return (
            self.dim == other.dim
            and self._origin == other._origin
            and self.shape == other.shape
            and np.array_equal(self._mask, other._mask)
        )

    def __hash__(self) -> int:
        return hash((self._origin, self.shape, self._mask.tobytes()))

    def __repr__(self) -> str:
        return f"BinaryImage(dim={self.dim}, origin={self._origin}, shape={self.shape}, size={len(self)})"

    def __or__(self, other: BinaryImage) -> BinaryImage:
        return set_union(self, other)

    def __and__(self, other: BinaryImage) -> BinaryImage:
        return set_intersection(self, other)

    def __sub__(self, other: BinaryImage) -> BinaryImage:
        return set_difference(self, other)

    def __le__(self, other: BinaryImage) -> bool:
        return is_subset(self, other)

    def __ge__(self, other: BinaryImage) -> bool:
        return is_subset(other, self)


def _binary_op(a: BinaryImage, b: BinaryImage, op) -> BinaryImage:
    dim = check_dims(a.dim, b.dim)
    if a.is_empty and b.is_empty:
        return BinaryImage.empty(dim)
    origin, shape = union_frame((a.origin, a.shape), (b.origin, b.shape))
    return BinaryImage(op(a.mask_in(origin, shape), b.mask_in(origin, shape)), origin)


def set_union(a: BinaryImage, b: BinaryImage) -> BinaryImage:
    return _binary_op(a, b, np.logical_or)


def set_intersection(a: BinaryImage, b: BinaryImage) -> BinaryImage:
    return _binary_op(a, b, np.logical_and)


def set_difference(a: BinaryImage, b: BinaryImage) -> BinaryImage:
    return _binary_op(a, b, lambda x, y: x & ~y)


def is_subset(a: BinaryImage, b: BinaryImage) -> bool:
    check_dims(a.dim, b.dim)
    if a.is_empty:
        return True
    return not (a.mask & ~b.mask_in(a.origin, a.shape)).any()


def first_point_not_in(a: BinaryImage, b: BinaryImage) -> Point | None:
    """Lexicographically first point of ``a`` missing from ``b``."""
    check_dims(a.dim, b.dim)
    if a.is_empty:
        return None
    missing = np.argwhere(a.mask & ~b.mask_in(a.origin, a.shape))
    if missing.size == 0:
        return None
    return tuple(int(o + i) for o, i in zip(a.origin, missing[0]))


class GreyImage:
    """A function from a finite domain F of E^N into {0, ..., ceiling}."""

    __slots__ = ("_origin", "_values", "_mask", "_ceiling")

    def __init__(
        self,
        values: np.ndarray,
        mask: np.ndarray | None = None,
        origin: Sequence[int] | None = None,
        ceiling: int = DEFAULT_CEILING,
    ):
        values = np.asarray(values, dtype=np.int64)
        mask = np.ones(values.shape, dtype=bool) if mask is None else np.asarray(mask, dtype=bool)
        if values.ndim == 0:
            raise DimensionMismatchError("images need at least one axis")
        if mask.shape != values.shape:
            raise DimensionMismatchError(f"mask shape {mask.shape} != values shape {values.shape}")
        ceiling = int(ceiling)
        if ceiling < 1:
            raise ValueRangeError(f"ceiling must be positive, got {ceiling}")
        live = values[mask]
        if live.size and (live.min() < 0 or live.max() > ceiling):
            raise ValueRangeError(
                f"grey values must lie in [0, {ceiling}], got [{live.min()}, {live.max()}]"
            )
        origin = _point(origin) if origin is not None else (0,) * values.ndim
        if len(origin) != values.ndim:
            raise DimensionMismatchError(
                f"origin {origin} does not match a {values.ndim}-dimensional image"
            )
        self._ceiling = ceiling
        window = _tight_window(mask)
        if window is None:
            shape = (0,) * values.ndim
            self._origin: Point = (0,) * values.ndim
            self._mask = _readonly(np.zeros(shape, dtype=bool))
            self._values = _readonly(np.zeros(shape, dtype=np.int64))
        else:
            offset, slices = window
            self._origin = tuple(o + d for o, d in zip(origin, offset))
            self._mask = _readonly(mask[slices].copy())
            self._values = _readonly(np.where(self._mask, values[slices], 0))

    @classmethod
    def empty(cls, dim: int, ceiling: int = DEFAULT_CEILING) -> GreyImage:
        return cls(np.zeros((0,) * dim, dtype=np.int64), ceiling=ceiling)

    @classmethod
    def from_mapping(
        cls,
        values: Mapping[Sequence[int], int],
        ceiling: int = DEFAULT_CEILING,
        dim: int | None = None,
    ) -> GreyImage:
        """Build an image from an explicit {point: value} mapping."""
        domain = BinaryImage.from_points(values.keys(), dim)
        if domain.is_empty:
            return cls.empty(domain.dim, ceiling)
        array = np.zeros(domain.shape, dtype=np.int64)
        for x, v in values.items():
            array[tuple(c - o for c, o in zip(_point(x), domain.origin))] = int(v)
        return cls(array, domain.mask, domain.origin, ceiling)

    @classmethod
    def from_array(
        cls,
        array: np.ndarray,
        ceiling: int = DEFAULT_CEILING,
        origin: Sequence[int] | None = None,
        mask: np.ndarray | None = None,
    ) -> GreyImage:
        return cls(array, mask, origin, ceiling)

    @classmethod
    def constant(cls, domain: BinaryImage, value: int = 0, ceiling: int = DEFAULT_CEILING) -> GreyImage:
        """The function equal to ``value`` everywhere on ``domain``."""
        if domain.is_empty:
            return cls.empty(domain.dim, ceiling)
        return cls(np.full(domain.shape, value, dtype=np.int64), domain.mask, domain.origin, ceiling)

    @property
    def dim(self) -> int:
        return self._values.ndim

    @property
    def origin(self) -> Point:
        return self._origin

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def mask(self) -> np.ndarray:
        return self._mask

    @property
    def ceiling(self) -> int:
        return self._ceiling

    @property
    def shape(self) -> tuple[int, ...]:
        return self._values.shape

    @property
    def is_empty(self) -> bool:
        return self._values.size == 0

    @property
    def domain(self) -> BinaryImage:
        return BinaryImage(self._mask, self._origin)

    def value(self, x: Sequence[int]) -> int | None:
        """f(x), or None when x is outside the domain."""
        x = _point(x)
        if len(x) != self.dim or self.is_empty:
            return None
        idx = tuple(c - o for c, o in zip(x, self._origin))
        if any(i < 0 or i >= n for i, n in zip(idx, self.shape)):
            return None
        if not self._mask[idx]:
            return None
        return int(self._values[idx])

    def to_mapping(self) -> dict[Point, int]:
        return {
            tuple(int(o + i) for o, i in zip(self._origin, idx)): int(self._values[tuple(idx)])
            for idx in np.argwhere(self._mask)
        }

    def max_value(self) -> int:
        return int(self._values[self._mask].max()) if not self.is_empty else 0

    def min_value(self) -> int:
        return int(self._values[self._mask].min()) if not self.is_empty else 0

    def with_ceiling(self, ceiling: int) -> GreyImage:
        """Same function, reinterpreted under a different ceiling."""
        return GreyImage(self._values, self._mask, self._origin, ceiling)

    def values_in(self, origin: Point, shape: tuple[int, ...], fill: int) -> np.ndarray:
        """Values over the frame (origin, shape), ``fill`` off the domain."""
        src = np.where(self._mask, self._values, fill)
        return embed(src, self._origin, origin, shape, fill)

    def __len__(self) -> int:
        return int(self._mask.sum())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GreyImage):
            return NotImplemented
        return (
            self._ceiling == other._ceiling
            and self.dim == other.dim
            and self._origin == other._origin
            and self.shape == other.shape
            and np.array_equal(self._mask, other._mask)
            and np.array_equal(self._values, other._values)
        )

    def __hash__(self) -> int:
        return hash((self._ceiling, self._origin, self.shape, self._mask.tobytes(), self._values.tobytes()))

    def __repr__(self) -> str:
        return (
            f"GreyImage(dim={self.dim}, origin={self._origin}, shape={self.shape}, "
            f"size={len(self)}, ceiling={self._ceiling})"
        )


class Sieve(BaseModel):
    """The lattice S = d_1 Z x ... x d_N Z of sampling points."""

    model_config = ConfigDict(frozen=True)

    spacing: tuple[int, ...]

    @field_validator("spacing")
    @classmethod
    def _positive(cls, spacing: tuple[int, ...]) -> tuple[int, ...]:
        if not spacing:
            raise ValueError("a sieve needs at least one axis")
        if any(d < 1 for d in spacing):
            raise ValueError(f"sieve spacings must be >= 1, got {spacing}")
        return spacing

    @classmethod
    def uniform(cls, d: int, dim: int = 2) -> Sieve:
        return cls(spacing=(d,) * dim)

    @property
    def dim(self) -> int:
        return len(self.spacing)

    def contains(self, x: Sequence[int]) -> bool:
        x = _point(x)
        check_dims(len(x), self.dim)
        return all(c % d == 0 for c, d in zip(x, self.spacing))

    def mask_for(self, origin: Point, shape: tuple[int, ...]) -> np.ndarray:
        """Boolean mask of the sieve points inside the frame (origin, shape)."""
        check_dims(len(origin), self.dim)
        mask = np.ones(shape, dtype=bool)
        for axis, (o, n, d) in enumerate(zip(origin, shape, self.spacing)):
            hit = (o + np.arange(n)) % d == 0
            view = [1] * len(shape)
            view[axis] = n
            mask &= hit.reshape(view)
        return mask

    def points_in(self, window: BinaryImage) -> BinaryImage:
        """Window intersected with S."""
        return restrict_binary(window, self)

    def is_sampled(self, image: BinaryImage | GreyImage) -> bool:
        """True when the domain of ``image`` lies inside S."""
        check_dims(image.dim, self.dim)
        if image.is_empty:
            return True
        return not (image.mask & ~self.mask_for(image.origin, image.shape)).any()

    def compact(self, f: GreyImage) -> GreyImage:
        """Re-index a sampled image on the coarse grid: x -> x / d.

        Raises:
            NotSampledError: if f has points off the sieve.
        """
        if not self.is_sampled(f):
            raise NotSampledError("compact() needs an image whose domain lies on the sieve")
        if f.is_empty:
            return f
        first = tuple((-o) % d for o, d in zip(f.origin, self.spacing))
        slices = tuple(slice(s, None, d) for s, d in zip(first, self.spacing))
        origin = tuple((o + s) // d for o, s, d in zip(f.origin, first, self.spacing))
        return GreyImage(f.values[slices], f.mask[slices], origin, f.ceiling)


def translate(a: BinaryImage, x: Sequence[int]) -> BinaryImage:
    """A_x = {a + x : a in A}."""
    x = _point(x)
    check_dims(a.dim, len(x))
    if a.is_empty:
        return a
    return BinaryImage(a.mask, tuple(o + c for o, c in zip(a.origin, x)))


def translate_image(f: GreyImage, x: Sequence[int]) -> GreyImage:
    """f_x(y) = f(y - x)."""
    x = _point(x)
    check_dims(f.dim, len(x))
    if f.is_empty:
        return f
    return GreyImage(f.values, f.mask, tuple(o + c for o, c in zip(f.origin, x)), f.ceiling)


def reflect(b: BinaryImage) -> BinaryImage:
    """The reflected set {-b : b in B}."""
    if b.is_empty:
        return b
    flipped = np.flip(b.mask)
    return BinaryImage(flipped, tuple(-(o + n - 1) for o, n in zip(b.origin, b.shape)))


def reflect_image(k: GreyImage) -> GreyImage:
    """k_reflected(x) = k(-x) on the reflected domain."""
    if k.is_empty:
        return k
    origin = tuple(-(o + n - 1) for o, n in zip(k.origin, k.shape))
    return GreyImage(np.flip(k.values), np.flip(k.mask), origin, k.ceiling)


def restrict_binary(a: BinaryImage, s: Sieve) -> BinaryImage:
    """A intersected with S."""
    check_dims(a.dim, s.dim)
    if a.is_empty:
        return a
    return BinaryImage(a.mask & s.mask_for(a.origin, a.shape), a.origin)


def restrict(f: GreyImage, s: Sieve) -> GreyImage:
    """f|S: f with its domain intersected with S."""
    check_dims(f.dim, s.dim)
    if f.is_empty:
        return f
    return GreyImage(f.values, f.mask & s.mask_for(f.origin, f.shape), f.origin, f.ceiling)


def _first_mismatch(f: GreyImage, g: GreyImage, bad) -> tuple[Point, int | None, int | None] | None:
    check_dims(f.dim, g.dim)
    check_ceilings(f.ceiling, g.ceiling)
    if f.is_empty and g.is_empty:
        return None
    origin, shape = union_frame((f.origin, f.shape), (g.origin, g.shape))
    fm, gm = f.domain.mask_in(origin, shape), g.domain.mask_in(origin, shape)
    fv, gv = f.values_in(origin, shape, 0), g.values_in(origin, shape, 0)
    hits = np.argwhere(bad(fm, gm, fv, gv))
    if hits.size == 0:
        return None
    idx = tuple(hits[0])
    x = tuple(int(o + i) for o, i in zip(origin, idx))
    return (
        x,
        int(fv[idx]) if fm[idx] else None,
        int(gv[idx]) if gm[idx] else None,
    )


def first_le_violation(f: GreyImage, g: GreyImage) -> tuple[Point, int | None, int | None] | None:
    """First point where ``f <= g`` fails: (x, f(x), g(x)), None meaning undefined."""
    return _first_mismatch(f, g, lambda fm, gm, fv, gv: fm & (~gm | (fv > gv)))


def first_difference(f: GreyImage, g: GreyImage) -> tuple[Point, int | None, int | None] | None:
    """First point where the two functions (domains included) disagree."""
    return _first_mismatch(f, g, lambda fm, gm, fv, gv: (fm != gm) | (fm & (fv != gv)))


def le(f: GreyImage, g: GreyImage) -> bool:
    """f <= g: F is a subset of G and f(x) <= g(x) on F.

    Raises:
        CeilingMismatchError: if the ceilings differ.
    """
    return first_le_violation(f, g) is None


def ge(f: GreyImage, g: GreyImage) -> bool:
    """f >= g."""
    return le(g, f)


def images_equal(f: GreyImage, g: GreyImage) -> bool:
    """Equal domains and equal values (ceilings must match)."""
    return first_difference(f, g) is None
