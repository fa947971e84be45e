"""Sampling conditions, reconstruction, and the sampling-theorem relations.

Every relation predicate returns a ``RelationReport``: one ``RelationResult``
per part of the statement, each ``pass``, ``fail`` (with the first violating
pixel) or ``premise-unmet`` when the input does not satisfy the hypotheses.
Predicates never raise for a false claim.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable, Sequence

from pydantic import BaseModel, ConfigDict, PrivateAttr

from .binary_morph import bclose, bdilate, berode, bopen
from .errors import InvalidFilterError, NotSampledError
from .grey_morph import gclose, gdilate, gerode, gopen
from .grid import (
    BinaryImage,
    GreyImage,
    Point,
    Sieve,
    check_dims,
    first_difference,
    first_le_violation,
    first_point_not_in,
    restrict,
    restrict_binary,
)
from .types import ConditionReport, ConditionResult, RelationReport, RelationResult, Witness

logger = logging.getLogger(__name__)


# --- Condition validation ---


def _fmt_point(x: Point) -> str:
    return f"({','.join(str(c) for c in x)})"


def _residues(sieve: Sieve) -> Sequence[Point]:
    return list(itertools.product(*(range(d) for d in sieve.spacing)))


def _sub(a: Point, b: Point) -> Point:
    return tuple(p - q for p, q in zip(a, b))


def _add(a: Point, b: Point) -> Point:
    return tuple(p + q for p, q in zip(a, b))


def _meets_sieve(k_points: frozenset[Point], a: Point, b: Point, sieve: Sieve) -> bool:
    """K_a and K_b share a sieve point."""
    shifted_b = {_add(u, b) for u in k_points}
    return any(_add(u, a) in shifted_b and sieve.contains(_add(u, a)) for u in k_points)


def uncovered_residue(K: BinaryImage, s: Sieve) -> Point | None:
    """First residue class of S that no translate of K over S reaches, if any."""
    check_dims(K.dim, s.dim)
    return next((r for r in _residues(s) if not any(s.contains(_sub(r, u)) for u in K.points)), None)


def _binary_condition_results(K: BinaryImage, s: Sieve) -> tuple[list[tuple[str, str, Witness | None]], list[str]]:
    """(structural checks, warnings) shared by the binary and grey validators.

    Each check is (label, description, witness-or-None).
    """
    check_dims(K.dim, s.dim)
    zero = (0,) * K.dim
    pts = K.points
    checks: list[tuple[str, str, Witness | None]] = [
        ("sieve_closed", "S (+) S = S", None),
        ("sieve_symmetric", "S = reflect(S)", None),
    ]

    # K meets S only at the origin
    meet: Witness | None = None
    if zero not in pts:
        meet = Witness(x=zero, note="origin not in K")
    else:
        for x in sorted(pts):
            if x != zero and s.contains(x):
                meet = Witness(x=x, note="K meets S away from the origin")
                break
    checks.append(("meets_sieve_at_origin", "K intersect S = {0}", meet))

    sym: Witness | None = None
    for x in sorted(pts):
        if tuple(-c for c in x) not in pts:
            sym = Witness(x=x, note="reflection of x not in K")
            break
    checks.append(("symmetric", "K = reflect(K)", sym))

    overlap: Witness | None = None
    for a, b in itertools.product(sorted(pts), repeat=2):
        if _sub(a, b) in pts and not _meets_sieve(pts, a, b, s):
            overlap = Witness(x=a, note=f"a={_fmt_point(a)} b={_fmt_point(b)} K_a, K_b share no sieve point")
            break
    checks.append(("overlap", "a in K_b implies K_a, K_b meet on S", overlap))

    warnings: list[str] = []
    if pts:
        missed = uncovered_residue(K, s)
        if missed is not None:
            warnings.append(f"S (+) K does not cover E^N: residue {_fmt_point(missed)} is missed")
        for r in _residues(s):
            bad = next(
                (u for u in sorted(pts) if not _meets_sieve(pts, _add(r, u), r, s)),
                None,
            )
            if bad is not None:
                warnings.append(
                    f"overlap fails off K: a={_fmt_point(_add(r, bad))} b={_fmt_point(r)}"
                )
                break
    return checks, warnings


def validate_binary_conditions(K: BinaryImage, s: Sieve) -> ConditionReport:
    """Check the binary sampling conditions I-V for K and the sieve S.

    Conditions I and II hold for every lattice sieve. III-V are decided by
    enumerating K x K; coverage of E^N by S (+) K and the overlap condition
    for translates outside K are checked over the fundamental cell of S and
    reported as warnings.
    """
    checks, warnings = _binary_condition_results(K, s)
    report = ConditionReport(
        kind="binary",
        conditions=[
            ConditionResult(condition=numeral, description=desc, passed=w is None, witness=w)
            for numeral, (_, desc, w) in zip(("I", "II", "III", "IV", "V"), checks)
        ],
        warnings=warnings,
    )
    logger.debug(f"Binary conditions for {K!r}, spacing {s.spacing}: valid={report.passed}")
    return report


def validate_grey_conditions(k: GreyImage, s: Sieve) -> ConditionReport:
    """Check the grey sampling conditions I-VII for the filter k and sieve S."""
    K = k.domain
    checks, warnings = _binary_condition_results(K, s)
    by_label = {label: (desc, w) for label, desc, w in checks}
    table = k.to_mapping()
    zero = (0,) * k.dim

    sym: Witness | None = None
    if by_label["symmetric"][1] is not None:
        sym = by_label["symmetric"][1]
    else:
        for x, v in sorted(table.items()):
            mirrored = table[tuple(-c for c in x)]
            if mirrored != v:
                sym = Witness(x=x, lhs=v, rhs=mirrored, note="k(x) != k(-x)")
                break

    triangle: Witness | None = None
    for a, b in itertools.product(sorted(table), repeat=2):
        d = _sub(a, b)
        if d in table and table[a] > table[d] + table[b]:
            triangle = Witness(
                x=a,
                lhs=table[a],
                rhs=table[d] + table[b],
                note=f"b={_fmt_point(b)} k(a) > k(a-b) + k(b)",
            )
            break

    centre: Witness | None = None
    if zero not in table:
        centre = Witness(x=zero, note="origin not in K")
    elif table[zero] != 0:
        centre = Witness(x=zero, lhs=table[zero], rhs=0, note="k(0) != 0")

    rows = [
        ("I", *by_label["sieve_closed"]),
        ("II", *by_label["sieve_symmetric"]),
        ("III", *by_label["meets_sieve_at_origin"]),
        ("IV", *by_label["overlap"]),
        ("V", "k = reflect(k)", sym),
        ("VI", "k(a) <= k(a-b) + k(b)", triangle),
        ("VII", "k(0) = 0", centre),
    ]
    report = ConditionReport(
        kind="grey",
        conditions=[
            ConditionResult(condition=n, description=desc, passed=w is None, witness=w)
            for n, desc, w in rows
        ],
        warnings=warnings,
    )
    logger.debug(f"Grey conditions for {k!r}, spacing {s.spacing}: valid={report.passed}")
    return report


class FilterSpec(BaseModel):
    """A sampling filter k together with its sieve, validated on construction."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    k: GreyImage
    sieve: Sieve

    _report: ConditionReport | None = PrivateAttr(default=None)
    _uncovered: Point | None = PrivateAttr(default=None)

    def model_post_init(self, __context) -> None:
        self._report = validate_grey_conditions(self.k, self.sieve)
        self._uncovered = uncovered_residue(self.k.domain, self.sieve) if not self.k.is_empty else None
        if not self._report.passed:
            failed = ", ".join(c.condition for c in self._report.failed)
            logger.warning(f"Filter fails sampling conditions {failed} for spacing {self.sieve.spacing}")
        elif self._uncovered is not None:
            logger.warning(f"Filter translates over spacing {self.sieve.spacing} miss residue {self._uncovered}")

    @classmethod
    def build(cls, k: GreyImage, sieve: Sieve) -> FilterSpec:
        return cls(k=k, sieve=sieve)

    @property
    def report(self) -> ConditionReport:
        return self._report

    @property
    def covers(self) -> bool:
        """S (+) K is all of E^N, so every point can be reconstructed."""
        return self._uncovered is None

    @property
    def valid(self) -> bool:
        return self._report.passed and self.covers

    @property
    def ceiling(self) -> int:
        return self.k.ceiling

    @property
    def K(self) -> BinaryImage:
        return self.k.domain

    def require_valid(self) -> None:
        """Raises InvalidFilterError if any sampling condition fails or the
        translates of K over S leave a residue class uncovered."""
        if not self._report.passed:
            failed = ", ".join(f"{c.condition} ({c.description})" for c in self._report.failed)
            raise InvalidFilterError(f"filter violates sampling conditions: {failed}")
        if not self.covers:
            raise InvalidFilterError(
                f"S (+) K does not cover E^N: residue {_fmt_point(self._uncovered)} is never reconstructed"
            )


# --- Reconstruction ---


def _require_sampled(g: GreyImage, spec: FilterSpec) -> None:
    if not spec.sieve.is_sampled(g):
        raise NotSampledError("reconstruction needs an image whose domain lies on the sieve")


def max_reconstruct(g: GreyImage, spec: FilterSpec) -> GreyImage:
    """Maximal reconstruction g (+) k of a sampled image."""
    spec.require_valid()
    _require_sampled(g, spec)
    return gdilate(g, spec.k)


def min_reconstruct(g: GreyImage, spec: FilterSpec) -> GreyImage:
    """Minimal reconstruction g . k of a sampled image."""
    spec.require_valid()
    _require_sampled(g, spec)
    return gclose(g, spec.k)


# --- Result helpers ---


def _unmet(name: str, note: str) -> RelationResult:
    return RelationResult(predicate=name, status="premise-unmet", witness=Witness(note=note))


def _ok(name: str) -> RelationResult:
    return RelationResult(predicate=name, status="pass")


def _fail(name: str, x: Point, lhs: int | None, rhs: int | None, note: str | None = None) -> RelationResult:
    return RelationResult(
        predicate=name, status="fail", witness=Witness(x=x, lhs=lhs, rhs=rhs, note=note)
    )


def equality(name: str, lhs: GreyImage, rhs: GreyImage) -> RelationResult:
    diff = first_difference(lhs, rhs)
    return _ok(name) if diff is None else _fail(name, *diff)


def bound_chain(name: str, *images: GreyImage) -> RelationResult:
    for step, (lo, hi) in enumerate(zip(images, images[1:]), start=1):
        bad = first_le_violation(lo, hi)
        if bad is not None:
            return _fail(name, *bad, note=f"step={step}")
    return _ok(name)


def _bin_fail(name: str, x: Point, lhs: BinaryImage, rhs: BinaryImage, note: str | None = None) -> RelationResult:
    return _fail(name, x, int(x in lhs), int(x in rhs), note)


def _bin_equal(name: str, lhs: BinaryImage, rhs: BinaryImage) -> RelationResult:
    x = first_point_not_in(lhs, rhs) or first_point_not_in(rhs, lhs)
    return _ok(name) if x is None else _bin_fail(name, x, lhs, rhs)


def _bin_chain(name: str, *sets: BinaryImage) -> RelationResult:
    for step, (small, big) in enumerate(zip(sets, sets[1:]), start=1):
        x = first_point_not_in(small, big)
        if x is not None:
            return _bin_fail(name, x, small, big, note=f"step={step}")
    return _ok(name)


def relation_report(predicate: str, results: list[RelationResult]) -> RelationReport:
    return RelationReport(predicate=predicate, results=results)


def _implication(
    name: str,
    candidates: Sequence,
    premise: Callable[[object], bool],
    antecedent: Callable[[object], bool],
    conclusion: Callable[[object], RelationResult],
) -> RelationResult:
    """Check premise & antecedent => conclusion over generated candidates."""
    met = False
    for candidate in candidates:
        if not premise(candidate):
            continue
        met = True
        if antecedent(candidate):
            result = conclusion(candidate)
            if result.status == "fail":
                return result
    return _ok(name) if met else _unmet(name, "no candidate satisfies the premises")


# --- Binary sampling theorem ---


def check_binary_sampling(
    F: BinaryImage,
    K: BinaryImage,
    s: Sieve,
    opened: Sequence[BinaryImage] = (),
    closed: Sequence[BinaryImage] = (),
) -> RelationReport:
    """Evaluate the binary sampling theorem, results I-VII, on F.

    ``opened``/``closed`` are candidate sets A for results VI and VII; when
    none are given the reconstructions themselves are used.
    """
    name = "binary_sampling"
    FS = restrict_binary(F, s)
    dil = bdilate(FS, K)
    clo = bclose(FS, K)
    results = [
        _bin_equal(f"{name}.I", FS, restrict_binary(clo, s)),
        _bin_equal(f"{name}.II", FS, restrict_binary(dil, s)),
        _bin_chain(f"{name}.III", clo, bclose(F, K)),
        _bin_chain(f"{name}.IV", bopen(F, K), dil),
    ]
    if bopen(F, K) == F and bclose(F, K) == F:
        results.append(_bin_chain(f"{name}.V", clo, F, dil))
    else:
        results.append(_unmet(f"{name}.V", "F is not both K-open and K-closed"))
    results.append(
        _implication(
            f"{name}.VI",
            list(opened) or [dil],
            lambda A: bopen(A, K) == A and restrict_binary(A, s) == FS,
            lambda A: dil <= A,
            lambda A: _bin_equal(f"{name}.VI", A, dil),
        )
    )
    results.append(
        _implication(
            f"{name}.VII",
            list(closed) or [clo],
            lambda A: bclose(A, K) == A and restrict_binary(A, s) == FS,
            lambda A: A <= clo,
            lambda A: _bin_equal(f"{name}.VII", A, clo),
        )
    )
    return relation_report(name, results)


# --- Grey sampling theorem ---


def check_grey_sampling(
    f: GreyImage,
    spec: FilterSpec,
    closed: Sequence[GreyImage] = (),
    opened: Sequence[GreyImage] = (),
) -> RelationReport:
    """Evaluate the grey sampling theorem, results I-VII, on f.

    ``closed`` holds candidates g for result VI (g = g . k), ``opened`` for
    result VII (g = g o k); the reconstructions are used when none are given.
    """
    name = "grey_sampling"
    k, s = spec.k, spec.sieve
    fS = restrict(f, s)
    dil = gdilate(fS, k)
    clo = gclose(fS, k)
    results = [
        equality(f"{name}.I", fS, restrict(clo, s)),
        equality(f"{name}.II", fS, restrict(dil, s)),
        bound_chain(f"{name}.III", clo, gclose(f, k)),
        bound_chain(f"{name}.IV", gopen(f, k), dil),
    ]
    if gopen(f, k) == f and gclose(f, k) == f:
        results.append(bound_chain(f"{name}.V", clo, f, dil))
    else:
        results.append(_unmet(f"{name}.V", "f is not both k-open and k-closed"))
    results.append(
        _implication(
            f"{name}.VI",
            list(closed) or [clo],
            lambda g: gclose(g, k) == g and restrict(g, s) == fS,
            lambda g: first_le_violation(g, clo) is None,
            lambda g: equality(f"{name}.VI", g, clo),
        )
    )
    results.append(
        _implication(
            f"{name}.VII",
            list(opened) or [dil],
            lambda g: gopen(g, k) == g and restrict(g, s) == fS,
            lambda g: first_le_violation(dil, g) is None,
            lambda g: equality(f"{name}.VII", g, dil),
        )
    )
    return relation_report(name, results)


# --- Binary relations ---


def bin_prop14(F: BinaryImage, B: BinaryImage, s: Sieve) -> RelationReport:
    """Sampling then dilating stays inside dilating then sampling (and dually)."""
    name = "bin_prop14"
    FS, BS = restrict_binary(F, s), restrict_binary(B, s)
    if BS.is_empty:
        return relation_report(name, [_unmet(f"{name}.I", "B misses the sieve")])
    return relation_report(
        name,
        [
            _bin_chain(f"{name}.I", bdilate(FS, BS), restrict_binary(bdilate(F, B), s)),
            _bin_chain(f"{name}.II", restrict_binary(berode(F, B), s), berode(FS, BS)),
        ],
    )


def bin_lemma_a(F: BinaryImage, B: BinaryImage, s: Sieve) -> RelationReport:
    name = "bin_lemma_a"
    FS, BS = restrict_binary(F, s), restrict_binary(B, s)
    if BS.is_empty:
        return relation_report(name, [_unmet(f"{name}.I", "B misses the sieve")])
    return relation_report(
        name,
        [
            _bin_equal(f"{name}.I", bdilate(FS, BS), restrict_binary(bdilate(F, BS), s)),
            _bin_equal(f"{name}.II", berode(FS, BS), restrict_binary(berode(F, BS), s)),
        ],
    )


def _opened_premise(name: str, B: BinaryImage, K: BinaryImage, s: Sieve) -> RelationResult | None:
    if restrict_binary(B, s).is_empty:
        return _unmet(name, "B misses the sieve")
    if bopen(B, K) != B:
        return _unmet(name, "B is not K-open")
    return None


def bin_lemma_b(F: BinaryImage, B: BinaryImage, K: BinaryImage, s: Sieve) -> RelationReport:
    name = "bin_lemma_b"
    if unmet := _opened_premise(name, B, K, s):
        return relation_report(name, [unmet])
    FS, BS = restrict_binary(F, s), restrict_binary(B, s)
    return relation_report(
        name, [_bin_chain(name, bdilate(bclose(FS, K), B), bdilate(bdilate(FS, K), BS))]
    )


def bin_sample_dilation(F: BinaryImage, B: BinaryImage, K: BinaryImage, s: Sieve) -> RelationReport:
    """Dilating the samples equals sampling the dilated minimal reconstruction."""
    name = "bin_sample_dilation"
    if unmet := _opened_premise(name, B, K, s):
        return relation_report(name, [unmet])
    FS, BS = restrict_binary(F, s), restrict_binary(B, s)
    return relation_report(
        name, [_bin_equal(name, bdilate(FS, BS), restrict_binary(bdilate(bclose(FS, K), B), s))]
    )


def bin_sample_erosion(F: BinaryImage, B: BinaryImage, K: BinaryImage, s: Sieve) -> RelationReport:
    """Eroding the samples equals sampling the eroded maximal reconstruction."""
    name = "bin_sample_erosion"
    if unmet := _opened_premise(name, B, K, s):
        return relation_report(name, [unmet])
    FS, BS = restrict_binary(F, s), restrict_binary(B, s)
    return relation_report(
        name, [_bin_equal(name, berode(FS, BS), restrict_binary(berode(bdilate(FS, K), B), s))]
    )


def bin_prop16(F: BinaryImage, B: BinaryImage, s: Sieve) -> RelationReport:
    name = "bin_prop16"
    FS, BS = restrict_binary(F, s), restrict_binary(B, s)
    if BS.is_empty:
        return relation_report(name, [_unmet(name, "B misses the sieve")])
    return relation_report(name, [_bin_equal(name, restrict_binary(bopen(F, BS), s), bopen(FS, BS))])


def bin_prop17(F: BinaryImage, B: BinaryImage, s: Sieve) -> RelationReport:
    name = "bin_prop17"
    FS, BS = restrict_binary(F, s), restrict_binary(B, s)
    if BS.is_empty:
        return relation_report(name, [_unmet(name, "B misses the sieve")])
    return relation_report(name, [_bin_equal(name, restrict_binary(bclose(F, BS), s), bclose(FS, BS))])


def bin_open_close_bounds(F: BinaryImage, B: BinaryImage, K: BinaryImage, s: Sieve) -> RelationReport:
    """Sandwich the opening and closing of the samples between sampled bounds."""
    name = "bin_open_close_bounds"
    if unmet := _opened_premise(name, B, K, s):
        return relation_report(name, [unmet])
    FS, BS = restrict_binary(F, s), restrict_binary(B, s)
    BSK = bdilate(BS, K)
    return relation_report(
        name,
        [
            _bin_chain(
                f"{name}.I",
                restrict_binary(bopen(F, BSK), s),
                bopen(FS, BS),
                restrict_binary(bopen(bdilate(FS, K), B), s),
            ),
            _bin_chain(
                f"{name}.II",
                restrict_binary(bclose(bclose(FS, K), B), s),
                bclose(FS, BS),
                restrict_binary(bclose(F, BSK), s),
            ),
        ],
    )


def bin_open_close_exact(F: BinaryImage, B: BinaryImage, K: BinaryImage, s: Sieve) -> RelationReport:
    """Opening/closing commute with sampling when F and B are reconstructions."""
    name = "bin_open_close_exact"
    if unmet := _opened_premise(name, B, K, s):
        return relation_report(name, [unmet])
    FS, BS = restrict_binary(F, s), restrict_binary(B, s)
    if bdilate(BS, K) != B:
        return relation_report(name, [_unmet(name, "B is not (B & S) (+) K")])
    results = []
    if F == bdilate(FS, K):
        results.append(_bin_equal(f"{name}.I", bopen(FS, BS), restrict_binary(bopen(F, B), s)))
    else:
        results.append(_unmet(f"{name}.I", "F is not (F & S) (+) K"))
    if F == bclose(FS, K):
        results.append(_bin_equal(f"{name}.II", bclose(FS, BS), restrict_binary(bclose(F, B), s)))
    else:
        results.append(_unmet(f"{name}.II", "F is not (F & S) . K"))
    return relation_report(name, results)


# --- Grey relations ---


def _grey_sampled_se(name: str, b: GreyImage, spec: FilterSpec) -> tuple[GreyImage | None, RelationResult | None]:
    bS = restrict(b, spec.sieve)
    if bS.is_empty:
        return None, _unmet(name, "b misses the sieve")
    return bS, None


def _grey_opened_premise(name: str, b: GreyImage, spec: FilterSpec) -> tuple[GreyImage | None, RelationResult | None]:
    bS, unmet = _grey_sampled_se(name, b, spec)
    if unmet:
        return None, unmet
    if gopen(b, spec.k) != b:
        return None, _unmet(name, "b is not k-open")
    return bS, None


def grey_prop14a(f: GreyImage, b: GreyImage, spec: FilterSpec) -> RelationReport:
    name = "grey_prop14a"
    bS, unmet = _grey_sampled_se(name, b, spec)
    if unmet:
        return relation_report(name, [unmet])
    s = spec.sieve
    fS = restrict(f, s)
    return relation_report(
        name,
        [
            bound_chain(f"{name}.I", gdilate(fS, bS), restrict(gdilate(f, b), s)),
            bound_chain(f"{name}.II", restrict(gerode(f, b), s), gerode(fS, bS)),
        ],
    )


def grey_lemma_aa(f: GreyImage, b: GreyImage, spec: FilterSpec) -> RelationReport:
    name = "grey_lemma_aa"
    bS, unmet = _grey_sampled_se(name, b, spec)
    if unmet:
        return relation_report(name, [unmet])
    s = spec.sieve
    fS = restrict(f, s)
    return relation_report(
        name,
        [
            equality(f"{name}.I", gdilate(fS, bS), restrict(gdilate(f, bS), s)),
            equality(f"{name}.II", gerode(fS, bS), restrict(gerode(f, bS), s)),
        ],
    )


def grey_lemma_ba(f: GreyImage, b: GreyImage, spec: FilterSpec) -> RelationReport:
    name = "grey_lemma_ba"
    bS, unmet = _grey_opened_premise(name, b, spec)
    if unmet:
        return relation_report(name, [unmet])
    k = spec.k
    fS = restrict(f, spec.sieve)
    return relation_report(name, [bound_chain(name, gdilate(gclose(fS, k), b), gdilate(gdilate(fS, k), bS))])


def grey_sample_dilation(f: GreyImage, b: GreyImage, spec: FilterSpec) -> RelationReport:
    """f|S (+) b|S = ((f|S . k) (+) b)|S for k-open b."""
    name = "grey_sample_dilation"
    bS, unmet = _grey_opened_premise(name, b, spec)
    if unmet:
        return relation_report(name, [unmet])
    s = spec.sieve
    fS = restrict(f, s)
    return relation_report(name, [equality(name, gdilate(fS, bS), restrict(gdilate(gclose(fS, spec.k), b), s))])


def grey_sample_erosion(f: GreyImage, b: GreyImage, spec: FilterSpec) -> RelationReport:
    """f|S (-) b|S = ((f|S (+) k) (-) b)|S for k-open b."""
    name = "grey_sample_erosion"
    bS, unmet = _grey_opened_premise(name, b, spec)
    if unmet:
        return relation_report(name, [unmet])
    s = spec.sieve
    fS = restrict(f, s)
    return relation_report(name, [equality(name, gerode(fS, bS), restrict(gerode(gdilate(fS, spec.k), b), s))])


def grey_prop16a(f: GreyImage, b: GreyImage, spec: FilterSpec) -> RelationReport:
    name = "grey_prop16a"
    bS, unmet = _grey_sampled_se(name, b, spec)
    if unmet:
        return relation_report(name, [unmet])
    s = spec.sieve
    return relation_report(name, [equality(name, restrict(gopen(f, bS), s), gopen(restrict(f, s), bS))])


def grey_prop17a(f: GreyImage, b: GreyImage, spec: FilterSpec) -> RelationReport:
    name = "grey_prop17a"
    bS, unmet = _grey_sampled_se(name, b, spec)
    if unmet:
        return relation_report(name, [unmet])
    s = spec.sieve
    return relation_report(name, [equality(name, restrict(gclose(f, bS), s), gclose(restrict(f, s), bS))])


def grey_open_close_bounds(f: GreyImage, b: GreyImage, spec: FilterSpec) -> RelationReport:
    name = "grey_open_close_bounds"
    bS, unmet = _grey_opened_premise(name, b, spec)
    if unmet:
        return relation_report(name, [unmet])
    k, s = spec.k, spec.sieve
    fS = restrict(f, s)
    bSk = gdilate(bS, k)
    return relation_report(
        name,
        [
            bound_chain(
                f"{name}.I",
                restrict(gopen(f, bSk), s),
                gopen(fS, bS),
                restrict(gopen(gdilate(fS, k), b), s),
            ),
            bound_chain(
                f"{name}.II",
                restrict(gclose(gclose(fS, k), b), s),
                gclose(fS, bS),
                restrict(gclose(f, bSk), s),
            ),
        ],
    )


def grey_open_close_exact(f: GreyImage, b: GreyImage, spec: FilterSpec) -> RelationReport:
    """Opening/closing commute with sampling when f and b are reconstructions."""
    name = "grey_open_close_exact"
    bS, unmet = _grey_opened_premise(name, b, spec)
    if unmet:
        return relation_report(name, [unmet])
    k, s = spec.k, spec.sieve
    if gdilate(bS, k) != b:
        return relation_report(name, [_unmet(name, "b is not b|S (+) k")])
    fS = restrict(f, s)
    results = []
    if f == gdilate(fS, k):
        results.append(equality(f"{name}.I", gopen(fS, bS), restrict(gopen(f, b), s)))
    else:
        results.append(_unmet(f"{name}.I", "f is not f|S (+) k"))
    if f == gclose(fS, k):
        results.append(equality(f"{name}.II", gclose(fS, bS), restrict(gclose(f, b), s)))
    else:
        results.append(_unmet(f"{name}.II", "f is not f|S . k"))
    return relation_report(name, results)


def _prop22_through_placements(
    name: str, table: dict, offsets: dict, eroded: dict, s: Sieve
) -> RelationResult:
    """For each y and every placement w realising f(y) in the opening, every
    sample z in K_w & K_y satisfies f(y) <= f(z) + k(y - z), and one exists.

    With u = y - w and z' = z - w this is f(w + u) <= f(w + z') + k(u - z')
    over u, z' in K with u - z' in K.
    """
    for y, fy in sorted(table.items()):
        reach = {}
        for u, ku in offsets.items():
            w = _sub(y, u)
            if w in eroded:
                reach[w] = eroded[w] + ku
        if not reach:
            return _fail(name, y, fy, None, note="no placement reaches y")
        top = max(reach.values())
        for w in sorted(p for p, v in reach.items() if v == top):
            shared = [
                z for z in (_add(w, v) for v in offsets) if s.contains(z) and _sub(y, z) in offsets
            ]
            if not shared:
                return _fail(name, y, fy, None, note=f"w={_fmt_point(w)} K_w, K_y share no sample")
            for z in sorted(shared):
                bound = table[z] + offsets[_sub(y, z)]
                if fy > bound:
                    return _fail(name, y, fy, bound, note=f"w={_fmt_point(w)} z={_fmt_point(z)}")
    return _ok(name)


def _prop22_nearby_sample(name: str, table: dict, offsets: dict, s: Sieve) -> RelationResult:
    """Some s in F & S with y - s in K has f(y) <= f(s) + k(y - s)."""
    for y, fy in sorted(table.items()):
        best: int | None = None
        for u, ku in offsets.items():
            src = _sub(y, u)
            if src in table and s.contains(src):
                cand = table[src] + ku
                best = cand if best is None else max(best, cand)
        if best is None or fy > best:
            return _fail(name, y, fy, best, note="no bounding sample")
    return _ok(name)


def grey_prop22(f: GreyImage, spec: FilterSpec) -> RelationReport:
    """Values of a k-open image are bounded through nearby samples.

    I: for every y in F and every placement w of k realising f(y) in the
    opening, each z in K_w & K_y & S gives f(y) <= f(z) + k(y - z), and such a
    z exists. II (the case u = z = 0): some s in F & S with y - s in K gives
    f(y) <= f(s) + k(y - s).
    """
    name = "grey_prop22"
    k, s = spec.k, spec.sieve
    if gopen(f, k) != f:
        return relation_report(name, [_unmet(name, "f is not k-open")])
    table = f.to_mapping()
    offsets = k.to_mapping()
    eroded = gerode(f, k).to_mapping()
    return relation_report(
        name,
        [
            _prop22_through_placements(f"{name}.I", table, offsets, eroded, s),
            _prop22_nearby_sample(f"{name}.II", table, offsets, s),
        ],
    )


BINARY_RELATIONS = {
    "bin_prop14": bin_prop14,
    "bin_lemma_a": bin_lemma_a,
    "bin_lemma_b": bin_lemma_b,
    "bin_sample_dilation": bin_sample_dilation,
    "bin_sample_erosion": bin_sample_erosion,
    "bin_prop16": bin_prop16,
    "bin_prop17": bin_prop17,
    "bin_open_close_bounds": bin_open_close_bounds,
    "bin_open_close_exact": bin_open_close_exact,
}

GREY_RELATIONS = {
    "grey_prop14a": grey_prop14a,
    "grey_lemma_aa": grey_lemma_aa,
    "grey_lemma_ba": grey_lemma_ba,
    "grey_sample_dilation": grey_sample_dilation,
    "grey_sample_erosion": grey_sample_erosion,
    "grey_prop16a": grey_prop16a,
    "grey_prop17a": grey_prop17a,
    "grey_open_close_bounds": grey_open_close_bounds,
    "grey_open_close_exact": grey_open_close_exact,
}


def sieve_window(shape: Sequence[int], s: Sieve) -> BinaryImage:
    """The sieve points of a box anchored at the origin."""
    return restrict_binary(BinaryImage.box(shape), s)
