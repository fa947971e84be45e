"""Umbra sets in E^N x {0..l} and the top-surface transform.

These are explicit point sets: slow, literal, and used as an independent
oracle for the array-based grey morphology.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator

from .errors import EmptyStructuringElementError, PreconditionError, ValueRangeError
from .grid import BinaryImage, GreyImage, Point, check_ceilings, check_dims

logger = logging.getLogger(__name__)

UmbraPoint = tuple[Point, int]


class UmbraSet:
    """A finite subset of E^N x {0, ..., ceiling}."""

    __slots__ = ("points", "ceiling", "dim")

    def __init__(self, points: Iterable[UmbraPoint], ceiling: int, dim: int):
        pts = frozenset((tuple(int(c) for c in x), int(y)) for x, y in points)
        for x, y in pts:
            if len(x) != dim:
                raise PreconditionError(f"umbra point {x} is not {dim}-dimensional")
            if not 0 <= y <= ceiling:
                raise ValueRangeError(f"umbra height {y} outside [0, {ceiling}]")
        self.points: frozenset[UmbraPoint] = pts
        self.ceiling = int(ceiling)
        self.dim = int(dim)

    def columns(self) -> set[Point]:
        return {x for x, _ in self.points}

    def column_tops(self) -> dict[Point, int]:
        """Highest y per occupied column."""
        tops: dict[Point, int] = {}
        for x, y in self.points:
            if y > tops.get(x, -1):
                tops[x] = y
        return tops

    def column_floors(self) -> dict[Point, int]:
        """Lowest y per occupied column."""
        floors: dict[Point, int] = {}
        for x, y in self.points:
            if x not in floors or y < floors[x]:
                floors[x] = y
        return floors

    def __iter__(self) -> Iterator[UmbraPoint]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p: object) -> bool:
        return p in self.points

    def __le__(self, other: UmbraSet) -> bool:
        return self.points <= other.points

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UmbraSet):
            return NotImplemented
        return self.ceiling == other.ceiling and self.dim == other.dim and self.points == other.points

    def __hash__(self) -> int:
        return hash((self.ceiling, self.dim, self.points))

    def __repr__(self) -> str:
        return f"UmbraSet(dim={self.dim}, ceiling={self.ceiling}, size={len(self.points)})"


def umbra(f: GreyImage) -> UmbraSet:
    """U[f] = {(x, y) : x in F, 0 <= y <= f(x)}."""
    return UmbraSet(
        ((x, y) for x, v in f.to_mapping().items() for y in range(v + 1)),
        f.ceiling,
        f.dim,
    )


def top_surface(a: UmbraSet) -> GreyImage:
    """T[A](x) = max{y : (x, y) in A}, defined where the column is occupied."""
    tops = a.column_tops()
    if not tops:
        return GreyImage.empty(a.dim, a.ceiling)
    return GreyImage.from_mapping(tops, a.ceiling, a.dim)


def umbra_translate(a: UmbraSet, x0: Point, y0: int) -> UmbraSet:
    """Shift by (x0, y0), dropping points pushed above the ceiling.

    Raises:
        PreconditionError: if y0 is negative.
    """
    check_dims(a.dim, len(x0))
    if y0 < 0:
        raise PreconditionError(f"umbra translation needs y0 >= 0, got {y0}")
    l = a.ceiling
    moved = ((tuple(c + d for c, d in zip(x, x0)), y + y0) for x, y in a.points if y + y0 <= l)
    return UmbraSet(moved, l, a.dim)


def umbra_reflect(a: UmbraSet) -> UmbraSet:
    """The tilde operation: column -x becomes [l - T[A](x), l] for every occupied x.

    Only the top of each column matters, so the result is upward-closed.

    Raises:
        PreconditionError: for an empty set.
    """
    if not a.points:
        raise PreconditionError("cannot reflect an empty umbra set")
    l = a.ceiling
    return UmbraSet(
        ((tuple(-c for c in x), v) for x, top in a.column_tops().items() for v in range(l - top, l + 1)),
        l,
        a.dim,
    )


def udilate(a: UmbraSet, b: UmbraSet) -> UmbraSet:
    """Union of the clamped translates of A by every point of B."""
    check_dims(a.dim, b.dim)
    check_ceilings(a.ceiling, b.ceiling)
    out: set[UmbraPoint] = set()
    for xb, yb in b.points:
        out |= umbra_translate(a, xb, yb).points
    return UmbraSet(out, a.ceiling, a.dim)


def uerode(a: UmbraSet, b: UmbraSet) -> UmbraSet:
    """Slab erosion: {p : p + q in A for every q in B}.

    Columns where the grey erosion's minimum would be negative come out empty.

    Raises:
        EmptyStructuringElementError: if B is empty.
    """
    check_dims(a.dim, b.dim)
    check_ceilings(a.ceiling, b.ceiling)
    if not b.points:
        raise EmptyStructuringElementError("umbra erosion by an empty set")
    cols = a.columns()
    b_cols = {x for x, _ in b.points}
    candidates = None
    for xb in b_cols:
        shifted = {tuple(c - d for c, d in zip(x, xb)) for x in cols}
        candidates = shifted if candidates is None else candidates & shifted
    out = []
    for x in candidates or ():
        for y in range(a.ceiling + 1):
            if all(
                (tuple(c + d for c, d in zip(x, xb)), y + yb) in a.points for xb, yb in b.points
            ):
                out.append((x, y))
    return UmbraSet(out, a.ceiling, a.dim)


def uopen_union(a: UmbraSet, b: UmbraSet) -> UmbraSet:
    """Union of the clamped translates of B that fit inside A."""
    check_dims(a.dim, b.dim)
    check_ceilings(a.ceiling, b.ceiling)
    if not b.points:
        raise EmptyStructuringElementError("umbra opening by an empty set")
    cols = a.columns()
    b_cols = {x for x, _ in b.points}
    placements = None
    for xb in b_cols:
        shifted = {tuple(c - d for c, d in zip(x, xb)) for x in cols}
        placements = shifted if placements is None else placements & shifted
    out: set[UmbraPoint] = set()
    for x0 in placements or ():
        for y0 in range(a.ceiling + 1):
            moved = umbra_translate(b, x0, y0).points
            if moved and moved <= a.points:
                out |= moved
    return UmbraSet(out, a.ceiling, a.dim)


def uclose_tilde(a: UmbraSet, b: UmbraSet, window: BinaryImage) -> UmbraSet:
    """Closing via reflected translates: points of ``window`` x {0..l} lying in
    no reflected translate of B that misses A.

    ``window`` must contain every column the closing can occupy; placements
    cover every translate that reaches a window column.
    """
    check_dims(a.dim, b.dim, window.dim)
    check_ceilings(a.ceiling, b.ceiling)
    if not b.points:
        raise EmptyStructuringElementError("umbra closing by an empty set")
    l = a.ceiling
    tops = a.column_tops()
    # tilde of B_(x0, y0) is the tilde of B_(0, y0) shifted by -x0, and each of
    # its columns is an interval [floor, top]
    base: dict[int, dict[Point, tuple[int, int]]] = {}
    for y0 in range(l + 1):
        moved = umbra_translate(b, (0,) * b.dim, y0)
        if moved.points:
            tilde = umbra_reflect(moved)
            floors, ceils = tilde.column_floors(), tilde.column_tops()
            base[y0] = {u: (floors[u], ceils[u]) for u in floors}
    offsets = {u for spans in base.values() for u in spans}
    placements = {tuple(c - d for c, d in zip(x, u)) for x in window for u in offsets}
    # covered[x] is a bitmask over heights 0..l
    covered: dict[Point, int] = {}
    for p in placements:
        for spans in base.values():
            cells = {tuple(c + d for c, d in zip(p, u)): span for u, span in spans.items()}
            if any(tops.get(x, -1) >= lo for x, (lo, _) in cells.items()):
                continue
            for x, (lo, hi) in cells.items():
                covered[x] = covered.get(x, 0) | (((1 << (hi + 1)) - 1) ^ ((1 << lo) - 1))
    return UmbraSet(
        ((x, y) for x in window for y in range(l + 1) if not (covered.get(x, 0) >> y) & 1),
        l,
        a.dim,
    )
