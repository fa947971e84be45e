"""Randomized and exhaustive verification of the morphology and sampling laws.

Each trial draws its inputs from numpy's PCG64 generator seeded with
``seed + trial_index``; independent child streams (via ``SeedSequence.spawn``)
feed each input family, so a trial is reproducible on its own and the order
in which predicates touch their inputs does not matter. Trials run on a
thread pool and are aggregated in trial order, so reports are deterministic.
"""

from __future__ import annotations

import itertools
import logging
import time
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from functools import cached_property, partial
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import sampling
from .binary_morph import (
    bclose,
    bclose_oracle,
    bdilate,
    berode,
    bopen,
    bopen_oracle,
    dilation_adjunction_check as binary_adjunction_check,
    duality_check,
    open_close_duality_check,
)
from .config import Settings
from .elements import builtin
from .errors import BoundsTooLargeError, UnknownPredicateError
from .grey_morph import (
    closing_clamp_free,
    closing_duality_check,
    dilation_adjunction_check as grey_adjunction_check,
    gclose,
    gclose_oracle,
    gdilate,
    gerode,
    gopen,
    gopen_oracle,
    opening_clamp_free,
)
from .grid import (
    BinaryImage,
    GreyImage,
    Sieve,
    le,
    reflect,
    restrict,
    restrict_binary,
    translate,
    translate_image,
)
from .netpbm import format_sem
from .pooling import (
    adjunction_check,
    delta,
    h2_relations,
    reconstruction_fixpoint,
    rho,
    rho_is_idempotent,
    sigma,
    sigma_dot,
)
from .sampling import FilterSpec, bound_chain, equality, relation_report
from .tracing import task, workflow
from .types import RelationReport, RelationResult, Witness
from .umbra import top_surface, udilate, uerode, umbra, umbra_translate

logger = logging.getLogger(__name__)

SeChoice = Literal["flat_b", "b2", "random_opened"]

MAX_FILTER_DRAWS = 100
UMBRA_LIMIT = 4096  # |F| * (l + 1) above which the umbra oracles are skipped
_STREAMS = ("image", "binary", "element", "candidates", "perturb", "pairs")


def clamp_margin(*ses: GreyImage) -> int:
    """Twice the summed maxima of ``ses``: the headroom kept between image
    values and both 0 and l so that no composition in a suite clamps."""
    return 2 * sum(se.max_value() for se in ses)


def default_c(spec: FilterSpec) -> GreyImage:
    """Constant max(k) on the sieve points {0, +-d}^N."""
    pts = itertools.product(*((-d, 0, d) for d in spec.sieve.spacing))
    domain = BinaryImage.from_points(pts, spec.sieve.dim)
    return GreyImage.constant(domain, spec.k.max_value(), spec.ceiling)


def _element_bound(spec: FilterSpec, se_choice: SeChoice) -> int:
    """Upper bound on max(b) for the element a suite will draw."""
    peak = spec.k.max_value()
    if se_choice == "b2":
        return builtin("b2", spec.ceiling).max_value()
    if se_choice == "random_opened":
        return peak + 10
    return peak


# --- Configuration ---


class TrialConfig(BaseModel):
    """Parameters of a randomized verification run."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    seed: int = Field(default=7, ge=0, lt=2**64)
    trials: int = Field(default=200, ge=0)
    image_size: tuple[int, ...] = (24, 24)
    value_min: int = Field(default=0, ge=0)
    value_max: int = 63
    spec: FilterSpec
    se_choice: SeChoice = "flat_b"
    suite: list[str] = Field(default_factory=lambda: ["all"])
    holes: bool = True
    hole_probability: float = Field(default=0.1, ge=0.0, lt=1.0)
    threads: int | None = Field(default=None, ge=1)
    c: GreyImage | None = None

    @model_validator(mode="after")
    def _check_ranges(self) -> TrialConfig:
        if len(self.image_size) != self.spec.sieve.dim or any(n < 1 for n in self.image_size):
            raise ValueError(f"image_size {self.image_size} does not fit a {self.spec.sieve.dim}-D sieve")
        if not self.value_min <= self.value_max <= self.spec.ceiling:
            raise ValueError(
                f"need value_min <= value_max <= ceiling, got {self.value_min}, {self.value_max}, {self.spec.ceiling}"
            )
        return self

    @property
    def ceiling(self) -> int:
        return self.spec.ceiling

    @property
    def margin(self) -> int:
        c = self.c if self.c is not None else default_c(self.spec)
        bound = _element_bound(self.spec, self.se_choice)
        return 2 * (self.spec.k.max_value() + bound + c.max_value())

    @property
    def clamp_free(self) -> bool:
        return self.value_min >= self.margin and self.value_max + self.margin <= self.ceiling

    @classmethod
    def canonical(cls, spec: FilterSpec, se_choice: SeChoice = "flat_b", **overrides) -> TrialConfig:
        """Config whose value range keeps every checked composition clamp-free.

        When the ceiling leaves no room for the margin the full range [0, l] is
        used, and predicates with a clamp premise report it unmet per trial.
        """
        base = cls(spec=spec, se_choice=se_choice, value_max=0, c=overrides.get("c"))
        margin = base.margin
        if margin <= spec.ceiling - margin:
            values = {"value_min": margin, "value_max": min(margin + 63, spec.ceiling - margin)}
        else:
            logger.warning(f"Ceiling {spec.ceiling} leaves no clamp-free range for margin {margin}")
            values = {"value_min": 0, "value_max": spec.ceiling}
        values.update(overrides)
        return cls(spec=spec, se_choice=se_choice, **values)


# --- Reports ---


class Counterexample(BaseModel):
    """First failing input of a predicate."""

    trial: int | None = None
    seed: int | None = None
    witness: Witness | None = None
    inputs: dict[str, str] = Field(default_factory=dict)  # SEM text per input name


class PredicateTally(BaseModel):
    passed: int = 0
    failed: int = 0
    premise_unmet: int = 0
    first_counterexample: Counterexample | None = None

    @property
    def status(self) -> str:
        if self.failed:
            return "fail"
        return "pass" if self.passed else "premise-unmet"


class TrialReport(BaseModel):
    """Aggregated outcome of a run, keyed by predicate part."""

    suite: list[str]
    seed: int | None = None
    trials: int = 0
    evaluations: int = 0
    filtered_draws: int = 0
    tallies: dict[str, PredicateTally] = Field(default_factory=dict)
    wall_time: float = Field(default=0.0, exclude=True)

    @property
    def failures(self) -> int:
        return sum(t.failed for t in self.tallies.values())

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, result: RelationResult, counterexample: Callable[[], Counterexample]) -> None:
        tally = self.tallies.setdefault(result.predicate, PredicateTally())
        self.evaluations += 1
        if result.status == "pass":
            tally.passed += 1
        elif result.status == "premise-unmet":
            tally.premise_unmet += 1
        else:
            tally.failed += 1
            if tally.first_counterexample is None:
                tally.first_counterexample = counterexample()

    def render(self) -> str:
        lines = [f"SUITE {','.join(self.suite)} seed={self.seed} trials={self.trials}"]
        for name, t in self.tallies.items():
            line = f"RESULT {name} {t.status}"
            cx = t.first_counterexample
            if cx is not None and cx.witness is not None:
                line += f" {cx.witness.render()}"
            line += f" (pass={t.passed} fail={t.failed} premise-unmet={t.premise_unmet})"
            lines.append(line)
            if cx is not None and cx.trial is not None:
                lines.append(f"COUNTEREXAMPLE {name} trial={cx.trial} seed={cx.seed}")
        if self.filtered_draws:
            lines.append(f"FILTERED {self.filtered_draws} draws rejected by fixpoint premises")
        lines.append(f"VERDICT {'pass' if self.passed else 'fail'} evaluations={self.evaluations}")
        return "\n".join(lines)

    def json_lines(self) -> str:
        """One JSON record per predicate part, then a summary record."""
        lines = [
            PredicateRecord(predicate=name, **t.model_dump()).model_dump_json()
            for name, t in self.tallies.items()
        ]
        lines.append(self.model_dump_json(exclude={"tallies"}))
        return "\n".join(lines)


class PredicateRecord(PredicateTally):
    predicate: str


class ExhaustiveBounds(BaseModel):
    """Enumeration bounds: a full box domain at the origin and a value range."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    shape: tuple[int, ...] = (2, 2)
    ceiling: int = Field(default=3, ge=1)
    spacing: tuple[int, ...] = (2, 2)
    filter: GreyImage | None = None  # default: flat 3^N box

    def filter_spec(self) -> FilterSpec:
        dim = len(self.spacing)
        k = self.filter
        if k is None:
            k = GreyImage.constant(BinaryImage.centered_box(1, dim), 0, self.ceiling)
        return FilterSpec.build(k.with_ceiling(self.ceiling), Sieve(spacing=self.spacing))


# --- Generators ---


def random_image(
    rng: np.random.Generator,
    shape: tuple[int, ...],
    value_min: int,
    value_max: int,
    ceiling: int,
    hole_probability: float = 0.0,
) -> GreyImage:
    """Uniform values on a box at the origin, with independent domain holes."""
    values = rng.integers(value_min, value_max + 1, size=shape)
    mask = rng.random(shape) >= hole_probability if hole_probability > 0 else None
    return GreyImage(values, mask, None, ceiling)


def random_binary(rng: np.random.Generator, shape: tuple[int, ...], density: float = 0.5) -> BinaryImage:
    return BinaryImage(rng.random(shape) < density)


def _blocky(rng: np.random.Generator, shape: tuple[int, ...], low: int, high: int) -> np.ndarray:
    """Piecewise-constant array on square blocks of side 4..8."""
    side = int(rng.integers(4, 9))
    coarse = rng.integers(low, high + 1, size=tuple(-(-n // side) for n in shape))
    for axis in range(len(shape)):
        coarse = np.repeat(coarse, side, axis=axis)
    return coarse[tuple(slice(0, n) for n in shape)]


def random_opened_element(rng: np.random.Generator, k: GreyImage) -> GreyImage:
    """A 5^N element with holes outside its central 3^N box, opened by k."""
    dim, peak = k.dim, k.max_value()
    core = np.zeros((5,) * dim, dtype=bool)
    core[(slice(1, 4),) * dim] = True
    while True:
        mask = core | (rng.random((5,) * dim) < 0.6)
        values = rng.integers(peak, peak + 11, size=(5,) * dim)
        raw = GreyImage(values, mask, (-2,) * dim, k.ceiling)
        opened = gopen(raw, k)
        if not opened.is_empty:
            return opened


# --- Trial inputs ---


class TrialInputs:
    """Inputs of one trial, drawn lazily from per-family random streams."""

    def __init__(self, config: TrialConfig, index: int):
        self.config = config
        self.index = index
        self.seed = config.seed + index
        children = np.random.SeedSequence(self.seed).spawn(len(_STREAMS))
        self._rngs = {
            name: np.random.Generator(np.random.PCG64(child)) for name, child in zip(_STREAMS, children)
        }
        self.filtered_draws = 0

    def rng(self, stream: str) -> np.random.Generator:
        return self._rngs[stream]

    @property
    def spec(self) -> FilterSpec:
        return self.config.spec

    @property
    def k(self) -> GreyImage:
        return self.config.spec.k

    @property
    def sieve(self) -> Sieve:
        return self.config.spec.sieve

    @property
    def K(self) -> BinaryImage:
        return self.config.spec.K

    def _image(self, stream: str, holes: bool | None = None) -> GreyImage:
        cfg = self.config
        holes = cfg.holes if holes is None else holes
        return random_image(
            self.rng(stream),
            cfg.image_size,
            cfg.value_min,
            cfg.value_max,
            cfg.ceiling,
            cfg.hole_probability if holes else 0.0,
        )

    @cached_property
    def f(self) -> GreyImage:
        return self._image("image")

    @cached_property
    def g(self) -> GreyImage:
        return self._image("pairs")

    @cached_property
    def b(self) -> GreyImage:
        """The element b, always k-open."""
        choice, k = self.config.se_choice, self.k
        if choice == "random_opened":
            return random_opened_element(self.rng("element"), k)
        if choice == "b2":
            raw = builtin("b2", self.config.ceiling)
        else:
            raw = GreyImage.constant(builtin("flat5").domain, k.max_value(), self.config.ceiling)
        return gopen(raw, k)

    @cached_property
    def c(self) -> GreyImage:
        return self.config.c if self.config.c is not None else default_c(self.spec)

    @cached_property
    def F(self) -> BinaryImage:
        return random_binary(self.rng("binary"), self.config.image_size)

    @cached_property
    def B(self) -> BinaryImage:
        return self.b.domain

    # premise-filtered candidates

    @cached_property
    def grey_fixpoint(self) -> GreyImage | None:
        """An image that is both k-open and k-closed, or None after the cap."""
        cfg, k = self.config, self.k
        rng = self.rng("candidates")
        for draw in range(MAX_FILTER_DRAWS):
            if draw % 2 == 0:
                cand = GreyImage(_blocky(rng, cfg.image_size, cfg.value_min, cfg.value_max), ceiling=cfg.ceiling)
            else:
                h = random_image(rng, cfg.image_size, cfg.value_min, cfg.value_max, cfg.ceiling)
                cand = gclose(gopen(h, k), k)
            if gopen(cand, k) == cand and gclose(cand, k) == cand:
                return cand
            self.filtered_draws += 1
        return None

    @cached_property
    def binary_fixpoint(self) -> BinaryImage | None:
        K = self.K
        rng = self.rng("candidates")
        for draw in range(MAX_FILTER_DRAWS):
            if draw % 2 == 0:
                cand = BinaryImage(_blocky(rng, self.config.image_size, 0, 1).astype(bool))
            else:
                cand = bclose(bopen(random_binary(rng, self.config.image_size, 0.6), K), K)
            if bopen(cand, K) == cand and bclose(cand, K) == cand:
                return cand
            self.filtered_draws += 1
        return None

    def _off_sieve_point(self, domain: BinaryImage):
        pts = [x for x in sorted(domain) if not self.sieve.contains(x)]
        if not pts:
            return None
        return pts[int(self.rng("perturb").integers(len(pts)))]

    def grey_candidates(self) -> tuple[list[GreyImage], list[GreyImage]]:
        """(closed, opened) candidates g for the last two grey results."""
        k, s = self.k, self.sieve
        fS = restrict(self.f, s)
        clo, dil = gclose(fS, k), gdilate(fS, k)
        closed, opened = [clo], [dil]
        step = int(self.rng("perturb").integers(1, 4))
        if (x := self._off_sieve_point(clo.domain)) is not None:
            table = clo.to_mapping()
            table[x] = max(0, table[x] - step)
            closed.append(gclose(GreyImage.from_mapping(table, clo.ceiling, clo.dim), k))
        if (x := self._off_sieve_point(dil.domain)) is not None:
            table = dil.to_mapping()
            table[x] = min(dil.ceiling, table[x] + step)
            opened.append(gopen(GreyImage.from_mapping(table, dil.ceiling, dil.dim), k))
        return closed, opened

    def binary_candidates(self) -> tuple[list[BinaryImage], list[BinaryImage]]:
        """(opened, closed) candidate sets A for the last two binary results."""
        K, s = self.K, self.sieve
        FS = restrict_binary(self.F, s)
        dil, clo = bdilate(FS, K), bclose(FS, K)
        opened, closed = [dil], [clo]
        rng = self.rng("perturb")
        if not dil.is_empty:
            lo, hi = dil.bbox
            p = tuple(int(rng.integers(a, b + 1)) for a, b in zip(lo, hi))
            opened.append(bopen(dil | translate(K, p), K))
        if (x := self._off_sieve_point(clo)) is not None:
            closed.append(bclose(clo - BinaryImage.from_points([x]), K))
        return opened, closed

    def serialize(self) -> dict[str, str]:
        """SEM text of every input this trial has drawn so far."""
        out: dict[str, str] = {}
        for name in ("f", "g", "b", "c", "grey_fixpoint"):
            value = self.__dict__.get(name)
            if isinstance(value, GreyImage) and value.dim == 2:
                out[name] = format_sem(value)
        for name in ("F", "B", "binary_fixpoint"):
            value = self.__dict__.get(name)
            if isinstance(value, BinaryImage) and value.dim == 2:
                out[name] = format_sem(GreyImage.constant(value, 1, 1))
        return out


# --- Predicates ---


def _check(name: str, ok: bool, note: str | None = None) -> RelationResult:
    if ok:
        return RelationResult(predicate=name, status="pass")
    return RelationResult(predicate=name, status="fail", witness=Witness(note=note or "check failed"))


def _unmet(name: str, note: str) -> RelationReport:
    return relation_report(
        name, [RelationResult(predicate=name, status="premise-unmet", witness=Witness(note=note))]
    )


def _binary_sampling(t: TrialInputs) -> RelationReport:
    opened, closed = t.binary_candidates()
    report = sampling.check_binary_sampling(t.F, t.K, t.sieve, opened=opened, closed=closed)
    results = list(report.results)
    if (cand := t.binary_fixpoint) is not None:
        fixed = sampling.check_binary_sampling(cand, t.K, t.sieve)
        results = [fixed.results[4] if r.predicate.endswith(".V") else r for r in results]
    return relation_report(report.predicate, results)


def _grey_sampling(t: TrialInputs) -> RelationReport:
    closed, opened = t.grey_candidates()
    report = sampling.check_grey_sampling(t.f, t.spec, closed=closed, opened=opened)
    results = list(report.results)
    if (cand := t.grey_fixpoint) is not None:
        fixed = sampling.check_grey_sampling(cand, t.spec)
        results = [fixed.results[4] if r.predicate.endswith(".V") else r for r in results]
    return relation_report(report.predicate, results)


def _reconstruction_fixpoint(t: TrialInputs) -> RelationReport:
    s = t.sieve
    fS = restrict(t.f, s)
    name = "reconstruction_fixpoint"
    return relation_report(
        name,
        [
            equality(f"{name}.max", restrict(sampling.max_reconstruct(fS, t.spec), s), fS),
            equality(f"{name}.min", restrict(sampling.min_reconstruct(fS, t.spec), s), fS),
        ],
    )


def _binary_relation(fn) -> Callable[[TrialInputs], RelationReport]:
    def run(t: TrialInputs) -> RelationReport:
        if fn in (sampling.bin_prop14, sampling.bin_lemma_a, sampling.bin_prop16, sampling.bin_prop17):
            return fn(t.F, t.B, t.sieve)
        return fn(t.F, t.B, t.K, t.sieve)

    return run


def _bin_open_close_exact(t: TrialInputs) -> RelationReport:
    K, s = t.K, t.sieve
    FS = restrict_binary(t.F, s)
    F = bdilate(FS, K) if t.index % 2 == 0 else bclose(FS, K)
    B = bdilate(restrict_binary(t.B, s), K)
    return sampling.bin_open_close_exact(F, B, K, s)


def _grey_relation(fn) -> Callable[[TrialInputs], RelationReport]:
    return lambda t: fn(t.f, t.b, t.spec)


def _grey_open_close_exact(t: TrialInputs) -> RelationReport:
    k, s = t.k, t.sieve
    fS = restrict(t.f, s)
    f = gdilate(fS, k) if t.index % 2 == 0 else gclose(fS, k)
    b = gdilate(restrict(t.b, s), k)
    return sampling.grey_open_close_exact(f, b, t.spec)


def _grey_prop22(t: TrialInputs) -> RelationReport:
    return sampling.grey_prop22(gopen(t.f, t.k), t.spec)


def _umbra_sized(fn) -> Callable[[TrialInputs], RelationReport]:
    def run(t: TrialInputs) -> RelationReport:
        if len(t.f) * (t.config.ceiling + 1) > UMBRA_LIMIT:
            return _unmet(fn.__name__.lstrip("_"), "image too large for the umbra oracle")
        return fn(t)

    return run


@_umbra_sized
def _umbra_top_surface(t: TrialInputs) -> RelationReport:
    name = "umbra_top_surface"
    return relation_report(name, [equality(name, top_surface(umbra(t.f)), t.f)])


@_umbra_sized
def _umbra_dilation(t: TrialInputs) -> RelationReport:
    name = "umbra_dilation"
    lhs = top_surface(udilate(umbra(t.f), umbra(t.k)))
    return relation_report(
        name,
        [
            equality(name, lhs, gdilate(t.f, t.k)),
            _check(f"{name}.umbra", umbra(gdilate(t.f, t.k)) == udilate(umbra(t.f), umbra(t.k))),
        ],
    )


@_umbra_sized
def _umbra_erosion(t: TrialInputs) -> RelationReport:
    name = "umbra_erosion"
    strict = gerode(t.f, t.k, extend=False)
    eroded = uerode(umbra(t.f), umbra(t.k))
    return relation_report(
        name,
        [
            equality(name, top_surface(eroded), strict),
            _check(f"{name}.umbra", eroded == umbra(strict)),
        ],
    )


@_umbra_sized
def _umbra_translate(t: TrialInputs) -> RelationReport:
    name = "umbra_translate"
    rng = t.rng("perturb")
    x = tuple(int(v) for v in rng.integers(-3, 4, size=t.f.dim))
    y = int(rng.integers(0, min(3, t.config.ceiling) + 1))
    moved = translate_image(t.f, x)
    expected = GreyImage(np.minimum(moved.values + y, moved.ceiling), moved.mask, moved.origin, moved.ceiling)
    return relation_report(name, [equality(name, top_surface(umbra_translate(umbra(t.f), x, y)), expected)])


@_umbra_sized
def _umbra_monotonicity(t: TrialInputs) -> RelationReport:
    name = "umbra_monotonicity"
    f = t.f
    bumped = gdilate(f, GreyImage.constant(BinaryImage.from_points([(0,) * f.dim]), 1, f.ceiling))
    pairs = [(f, bumped), (bumped, f), (f, t.g)]
    ok = all(le(a, b) == (umbra(a) <= umbra(b)) for a, b in pairs)
    return relation_report(name, [_check(name, ok, "f <= g disagrees with U[f] within U[g]")])


@_umbra_sized
def _open_close_oracle(t: TrialInputs) -> RelationReport:
    name = "open_close_oracle"
    f, k = t.f, t.k
    results = []
    for part, fits, fast, oracle in (
        ("open", opening_clamp_free, gopen, gopen_oracle),
        ("close", closing_clamp_free, gclose, gclose_oracle),
    ):
        label = f"{name}.{part}"
        if fits(f, k):
            results.append(equality(label, fast(f, k), oracle(f, k)))
        else:
            results.append(
                RelationResult(predicate=label, status="premise-unmet", witness=Witness(note=f"{part} clamps"))
            )
    return relation_report(name, results)


def _pooling_adjunction(t: TrialInputs) -> RelationReport:
    name = "pooling_adjunction"
    f, spec = t.f, t.spec
    random_g = restrict(t.g, spec.sieve)
    pooled = sigma(f, spec)
    ok = (
        adjunction_check(f, pooled, spec)
        and adjunction_check(f, random_g, spec)
        and adjunction_check(sigma_dot(random_g, spec), random_g, spec)
    )
    return relation_report(name, [_check(name, ok, "sigma(f) <= g disagrees with f <= sigma_dot(g)")])


def _lemma_hl1(t: TrialInputs) -> RelationReport:
    return relation_report("lemma_hl1", [bound_chain("lemma_hl1", t.f, rho(t.f, t.spec))])


def _rho_delta(t: TrialInputs) -> RelationReport:
    return relation_report("rho_delta", [bound_chain("rho_delta", rho(t.f, t.spec), delta(t.f, t.spec))])


def _h2_relations(t: TrialInputs) -> RelationReport:
    return h2_relations(t.f, t.c, t.spec)


def _sigma_fixpoint(t: TrialInputs) -> RelationReport:
    return relation_report("sigma_fixpoint", [_check("sigma_fixpoint", reconstruction_fixpoint(t.f, t.spec))])


def _rho_idempotence(t: TrialInputs) -> RelationReport:
    name = "rho_idempotence"
    return relation_report(name, [_check(name, rho_is_idempotent(t.f, t.spec), "rho(rho(f)) != rho(f)")])


def _lemma(name: str, lhs: Callable, rhs: Callable) -> Callable[[TrialInputs], RelationReport]:
    def run(t: TrialInputs) -> RelationReport:
        return relation_report(name, [bound_chain(name, lhs(t), rhs(t))])

    return run


_LEMMAS = {
    "lemma_l1": _lemma("lemma_l1", lambda t: t.f, lambda t: gdilate(t.f, t.k)),
    "lemma_l2": _lemma(
        "lemma_l2", lambda t: restrict(t.f, t.sieve), lambda t: restrict(gdilate(t.f, t.k), t.sieve)
    ),
    "lemma_l3": _lemma("lemma_l3", lambda t: gerode(t.f, t.k), lambda t: t.f),
    "lemma_l4": _lemma(
        "lemma_l4", lambda t: gdilate(gerode(t.f, t.c), t.k), lambda t: gerode(gdilate(t.f, t.k), t.c)
    ),
    "lemma_l5": _lemma(
        "lemma_l5", lambda t: gdilate(gopen(t.f, t.c), t.k), lambda t: gopen(gdilate(t.f, t.k), t.c)
    ),
    "lemma_l6": _lemma(
        "lemma_l6", lambda t: gdilate(gclose(t.f, t.c), t.k), lambda t: gclose(gdilate(t.f, t.k), t.c)
    ),
    "lemma_l7": _lemma(
        "lemma_l7", lambda t: gclose(gerode(t.f, t.c), t.k), lambda t: gerode(gclose(t.f, t.k), t.c)
    ),
}


def _closing_duality(t: TrialInputs) -> RelationReport:
    name = "closing_duality"
    return relation_report(name, [_check(name, closing_duality_check(t.f, t.k))])


def _binary_duality(t: TrialInputs) -> RelationReport:
    name = "binary_duality"
    F, K = t.F, t.K
    reach = bdilate(F, reflect(K))
    window = BinaryImage.box(reach.shape, reach.origin)
    return relation_report(
        name,
        [
            _check(f"{name}.erosion", duality_check(F, K, window)),
            _check(f"{name}.closing", open_close_duality_check(F, K, window)),
        ],
    )


def _grey_adjunction(t: TrialInputs) -> RelationReport:
    name = "grey_adjunction"
    f, k = t.f, t.k
    ok = grey_adjunction_check(gerode(f, k), k, f) and grey_adjunction_check(t.g, k, f)
    return relation_report(name, [_check(name, ok)])


def _dilation_commutativity(t: TrialInputs) -> RelationReport:
    name = "dilation_commutativity"
    if t.f.is_empty:
        return _unmet(name, "f is empty")
    return relation_report(name, [equality(name, gdilate(t.f, t.b), gdilate(t.b, t.f))])


def _opening_laws(t: TrialInputs) -> RelationReport:
    name = "opening_laws"
    opened = gopen(t.f, t.k)
    return relation_report(
        name,
        [
            bound_chain(f"{name}.anti_extensive", opened, t.f),
            equality(f"{name}.idempotent", gopen(opened, t.k), opened),
        ],
    )


def _closing_laws(t: TrialInputs) -> RelationReport:
    name = "closing_laws"
    closed = gclose(t.f, t.k)
    return relation_report(
        name,
        [
            bound_chain(f"{name}.extensive", t.f, closed),
            equality(f"{name}.idempotent", gclose(closed, t.k), closed),
        ],
    )


def _binary_laws(t: TrialInputs) -> RelationReport:
    name = "binary_laws"
    F, K, B = t.F, t.K, t.B
    opened, closed = bopen(F, K), bclose(F, K)
    return relation_report(
        name,
        [
            _check(f"{name}.commutative", bdilate(F, B) == bdilate(B, F)),
            _check(f"{name}.associative", bdilate(bdilate(F, K), B) == bdilate(F, bdilate(K, B))),
            _check(f"{name}.adjunction", binary_adjunction_check(berode(F, K), K, F)),
            _check(f"{name}.opening", opened <= F and bopen(opened, K) == opened),
            _check(f"{name}.closing", F <= closed and bclose(closed, K) == closed),
        ],
    )


def _binary_oracle(t: TrialInputs) -> RelationReport:
    name = "binary_oracle"
    F, K = t.F, t.K
    return relation_report(
        name,
        [
            _check(f"{name}.open", bopen(F, K) == bopen_oracle(F, K)),
            _check(f"{name}.close", bclose(F, K) == bclose_oracle(F, K)),
        ],
    )


PREDICATES: dict[str, Callable[[TrialInputs], RelationReport]] = {
    "binary_sampling": _binary_sampling,
    **{name: _binary_relation(fn) for name, fn in sampling.BINARY_RELATIONS.items()},
    "bin_open_close_exact": _bin_open_close_exact,
    "grey_sampling": _grey_sampling,
    "reconstruction_fixpoint": _reconstruction_fixpoint,
    **{name: _grey_relation(fn) for name, fn in sampling.GREY_RELATIONS.items()},
    "grey_open_close_exact": _grey_open_close_exact,
    "grey_prop22": _grey_prop22,
    "umbra_top_surface": _umbra_top_surface,
    "umbra_dilation": _umbra_dilation,
    "umbra_erosion": _umbra_erosion,
    "umbra_translate": _umbra_translate,
    "umbra_monotonicity": _umbra_monotonicity,
    "open_close_oracle": _open_close_oracle,
    "pooling_adjunction": _pooling_adjunction,
    "lemma_hl1": _lemma_hl1,
    "rho_delta": _rho_delta,
    "h2_relations": _h2_relations,
    "sigma_fixpoint": _sigma_fixpoint,
    "rho_idempotence": _rho_idempotence,
    **_LEMMAS,
    "closing_duality": _closing_duality,
    "binary_duality": _binary_duality,
    "grey_adjunction": _grey_adjunction,
    "dilation_commutativity": _dilation_commutativity,
    "opening_laws": _opening_laws,
    "closing_laws": _closing_laws,
    "binary_laws": _binary_laws,
    "binary_oracle": _binary_oracle,
}

SUITES: dict[str, list[str]] = {
    "binary_sampling": ["binary_sampling"],
    "grey_sampling": ["grey_sampling", "reconstruction_fixpoint"],
    "binary_relations": list(sampling.BINARY_RELATIONS),
    "grey_relations": [*sampling.GREY_RELATIONS, "grey_prop22"],
    "grey_open_close": ["grey_open_close_bounds", "grey_open_close_exact"],
    "umbra_oracle": [
        "umbra_top_surface",
        "umbra_dilation",
        "umbra_erosion",
        "umbra_translate",
        "umbra_monotonicity",
        "open_close_oracle",
    ],
    "pooling": ["pooling_adjunction", "lemma_hl1", "rho_delta", "h2_relations", "sigma_fixpoint"],
    "appendix_lemmas": list(_LEMMAS),
    "duality": ["closing_duality", "binary_duality"],
    "morphology_laws": [
        "grey_adjunction",
        "dilation_commutativity",
        "opening_laws",
        "closing_laws",
        "binary_laws",
        "binary_oracle",
    ],
}
SUITES["all"] = [name for suite in list(SUITES.values()) for name in suite]


def resolve_suite(names: Iterable[str]) -> list[str]:
    """Expand suite names (kebab or snake case) into predicate names.

    Raises:
        UnknownPredicateError: for a name that is neither a suite nor a predicate.
    """
    out: list[str] = []
    for raw in names:
        key = raw.replace("-", "_")
        if key in SUITES:
            members = SUITES[key]
        elif key in PREDICATES:
            members = [key]
        else:
            raise UnknownPredicateError(f"unknown suite or predicate: {raw}")
        out.extend(m for m in members if m not in out)
    return out


# --- Runners ---


@task(name="run_trial")
def _run_trial(config: TrialConfig, names: list[str], index: int):
    trial = TrialInputs(config, index)
    outcomes = []
    for name in names:
        report = PREDICATES[name](trial)
        for result in report.results:
            cx = None
            if result.status == "fail":
                cx = Counterexample(
                    trial=index, seed=trial.seed, witness=result.witness, inputs=trial.serialize()
                )
            outcomes.append((result, cx))
    return outcomes, trial.filtered_draws


@workflow(name="run_suite")
def run_suite(config: TrialConfig, settings: Settings | None = None) -> TrialReport:
    """Run every predicate of ``config.suite`` over ``config.trials`` trials."""
    names = resolve_suite(config.suite)
    config.spec.require_valid()
    if not config.clamp_free:
        logger.warning(
            f"Values [{config.value_min}, {config.value_max}] are not clamp-free "
            f"(margin {config.margin}, ceiling {config.ceiling}); non-flat laws may fail"
        )
    threads = config.threads or (settings or Settings.from_env()).threads
    logger.info(f"Running {len(names)} predicates x {config.trials} trials on {threads} threads")

    start = time.perf_counter()
    report = TrialReport(suite=list(config.suite), seed=config.seed, trials=config.trials)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for outcomes, filtered in pool.map(partial(_run_trial, config, names), range(config.trials)):
            report.filtered_draws += filtered
            for result, cx in outcomes:
                report.record(result, lambda cx=cx: cx)
    report.wall_time = time.perf_counter() - start
    logger.info(
        f"Suite done: {report.evaluations} evaluations, {report.failures} failures, {report.wall_time:.2f}s"
    )
    return report


def _enumerate_images(domain: BinaryImage, ceiling: int) -> Iterable[GreyImage]:
    """Every function from ``domain`` into {0..ceiling}."""
    for values in itertools.product(range(ceiling + 1), repeat=len(domain)):
        array = np.zeros(domain.shape, dtype=np.int64)
        array[domain.mask] = values
        yield GreyImage(array, domain.mask, domain.origin, ceiling)


def _enumerate_partial(window: BinaryImage, ceiling: int) -> Iterable[GreyImage]:
    """Every function on every subset of ``window``."""
    pts = list(window)
    for choice in itertools.product(range(-1, ceiling + 1), repeat=len(pts)):
        table = {x: v for x, v in zip(pts, choice) if v >= 0}
        yield GreyImage.from_mapping(table, ceiling, window.dim) if table else GreyImage.empty(window.dim, ceiling)


def _exhaustive_count(predicate: str, bounds: ExhaustiveBounds, spec: FilterSpec) -> int:
    n = int(np.prod(bounds.shape))
    l = bounds.ceiling
    if predicate == "adjunction":
        window = _sigma_window(bounds, spec)
        return (l + 1) ** n * (l + 2) ** len(window)
    if predicate == "grey_adjunction":
        return (l + 1) ** (2 * n)
    return 2**n


def _sigma_window(bounds: ExhaustiveBounds, spec: FilterSpec) -> BinaryImage:
    reach = bdilate(BinaryImage.box(bounds.shape), spec.K)
    return restrict_binary(BinaryImage.box(reach.shape, reach.origin), spec.sieve)


EXHAUSTIVE = ("adjunction", "grey_adjunction", "binary_sampling")


@workflow(name="exhaustive_small")
def exhaustive_small(
    predicate: str, bounds: ExhaustiveBounds, settings: Settings | None = None
) -> TrialReport:
    """Check a law on every image within ``bounds``.

    ``adjunction``: the pooling adjunction for every f on the box and every g
    on the sieve points the pooled images can reach. ``grey_adjunction``: the
    dilation/erosion adjunction for every pair (h, f) on the box.
    ``binary_sampling``: the binary sampling theorem for every subset of the box.

    Raises:
        UnknownPredicateError: for an unsupported predicate.
        BoundsTooLargeError: when the enumeration exceeds the evaluation limit.
    """
    key = predicate.replace("-", "_")
    if key not in EXHAUSTIVE:
        raise UnknownPredicateError(f"no exhaustive check named {predicate}; choose from {', '.join(EXHAUSTIVE)}")
    report = TrialReport(suite=[key])
    if any(n <= 0 for n in bounds.shape):
        return report
    settings = settings or Settings.from_env()
    spec = bounds.filter_spec()
    spec.require_valid()
    count = _exhaustive_count(key, bounds, spec)
    if count > settings.evaluation_limit:
        raise BoundsTooLargeError(f"{key} over {bounds.shape} needs {count} evaluations (limit {settings.evaluation_limit})")
    logger.info(f"Enumerating {count} cases for {key}")

    start = time.perf_counter()
    box = BinaryImage.box(bounds.shape)

    def fail(**inputs: GreyImage) -> Callable[[], Counterexample]:
        return lambda: Counterexample(inputs={n: format_sem(v) for n, v in inputs.items() if v.dim == 2})

    if key == "adjunction":
        fs = [(f, sigma(f, spec)) for f in _enumerate_images(box, bounds.ceiling)]
        gs = [(g, sigma_dot(g, spec)) for g in _enumerate_partial(_sigma_window(bounds, spec), bounds.ceiling)]
        for f, pooled in fs:
            for g, rebuilt in gs:
                ok = le(pooled, g) == le(f, rebuilt)
                report.record(_check(key, ok, "sigma(f) <= g disagrees with f <= sigma_dot(g)"), fail(f=f, g=g))
    elif key == "grey_adjunction":
        images = list(_enumerate_images(box, bounds.ceiling))
        for h in images:
            for f in images:
                report.record(_check(key, grey_adjunction_check(h, spec.k, f)), fail(h=h, f=f))
    else:
        for bits in itertools.product((False, True), repeat=len(box)):
            F = BinaryImage(np.array(bits, dtype=bool).reshape(bounds.shape))
            for result in sampling.check_binary_sampling(F, spec.K, spec.sieve).results:
                report.record(result, fail(F=GreyImage.constant(F, 1, 1)))
    report.trials = count
    report.wall_time = time.perf_counter() - start
    logger.info(f"Exhaustive {key}: {report.evaluations} evaluations, {report.failures} failures")
    return report
