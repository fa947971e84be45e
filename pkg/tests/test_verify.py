import json

import pytest
from pydantic import ValidationError

from morphsample.config import Settings
from morphsample.elements import builtin
from morphsample.errors import BoundsTooLargeError, InvalidFilterError, UnknownPredicateError
from morphsample.grid import BinaryImage, GreyImage, Sieve
from morphsample.sampling import FilterSpec
from morphsample.verify import (
    PREDICATES,
    SUITES,
    ExhaustiveBounds,
    TrialConfig,
    TrialInputs,
    clamp_margin,
    exhaustive_small,
    resolve_suite,
    run_suite,
)

SETTINGS = Settings(threads=2)


def _small(spec, suite, se_choice="flat_b", **overrides):
    params = {"trials": 3, "image_size": (8, 8), "suite": suite, **overrides}
    return TrialConfig.canonical(spec, se_choice, **params)


def test_clamp_margin(k2, b2):
    assert clamp_margin(k2, b2) == 60
    assert clamp_margin() == 0


def test_canonical_values_clear_the_margin(k2_spec, flat_spec):
    config = TrialConfig.canonical(k2_spec, "b2")
    assert (config.value_min, config.value_max) == (80, 143)
    assert config.clamp_free
    flat = TrialConfig.canonical(flat_spec)
    assert (flat.value_min, flat.value_max) == (0, 63)


def test_config_rejects_bad_ranges(flat_spec):
    with pytest.raises(ValidationError):
        TrialConfig(spec=flat_spec, value_max=300)
    with pytest.raises(ValidationError):
        TrialConfig(spec=flat_spec, image_size=(8,))


def test_suites_resolve_in_either_case():
    assert resolve_suite(["grey-open-close"]) == ["grey_open_close_bounds", "grey_open_close_exact"]
    assert resolve_suite(["duality", "closing_duality"]) == ["closing_duality", "binary_duality"]
    with pytest.raises(UnknownPredicateError):
        resolve_suite(["no-such-suite"])


def test_every_suite_member_is_registered():
    for members in SUITES.values():
        assert set(members) <= set(PREDICATES)
    assert "rho_idempotence" in PREDICATES
    assert "rho_idempotence" not in SUITES["all"]


def test_trial_inputs_are_reproducible(flat_spec):
    config = _small(flat_spec, ["all"])
    assert TrialInputs(config, 3).f == TrialInputs(config, 3).f
    assert TrialInputs(config, 3).F == TrialInputs(config, 3).F
    assert TrialInputs(config, 3).f != TrialInputs(config, 4).f


def test_zero_trials_gives_an_empty_passing_report(flat_spec):
    report = run_suite(_small(flat_spec, ["all"], trials=0), SETTINGS)
    assert report.evaluations == 0
    assert report.passed
    assert report.render().endswith("VERDICT pass evaluations=0")


def test_runs_are_deterministic(k2_spec):
    config = _small(k2_spec, ["grey_sampling", "pooling"], "b2")
    first, second = run_suite(config, SETTINGS), run_suite(config, Settings(threads=1))
    assert first.render() == second.render()


@pytest.mark.parametrize(
    ("spec_name", "se_choice", "suite"),
    [
        ("flat_spec", "flat_b", "binary_sampling"),
        ("flat_spec", "flat_b", "binary_relations"),
        ("flat_spec", "flat_b", "morphology_laws"),
        ("k2_spec", "b2", "grey_sampling"),
        ("k2_spec", "b2", "grey_relations"),
        ("k2_spec", "b2", "grey_open_close"),
        ("k2_spec", "b2", "pooling"),
        ("k2_spec", "b2", "appendix_lemmas"),
        ("k2_spec", "random_opened", "duality"),
    ],
)
def test_suites_pass_on_small_runs(spec_name, se_choice, suite, request):
    report = run_suite(_small(request.getfixturevalue(spec_name), [suite], se_choice), SETTINGS)
    assert report.passed, report.render()
    assert report.evaluations > 0


def test_umbra_oracles_skip_large_images(flat_spec):
    report = run_suite(_small(flat_spec, ["umbra_oracle"]), SETTINGS)
    assert {t.status for t in report.tallies.values()} == {"premise-unmet"}


def test_umbra_oracles_on_a_small_ceiling():
    k = GreyImage.constant(BinaryImage.centered_box(1), 0, 15)
    spec = FilterSpec.build(k, Sieve(spacing=(2, 2)))
    config = TrialConfig(spec=spec, trials=3, image_size=(6, 6), value_max=15, suite=["umbra_oracle"])
    report = run_suite(config, SETTINGS)
    assert report.passed, report.render()
    assert report.tallies["umbra_dilation"].passed == 3


def test_invalid_filter_is_refused(sieve2):
    spec = FilterSpec.build(GreyImage.constant(BinaryImage.centered_box(2), 0, 255), sieve2)
    with pytest.raises(InvalidFilterError):
        run_suite(TrialConfig(spec=spec, trials=1), SETTINGS)


def test_json_lines_end_with_a_summary(flat_spec):
    report = run_suite(_small(flat_spec, ["duality"], trials=2), SETTINGS)
    records = [json.loads(line) for line in report.json_lines().splitlines()]
    assert records[0]["predicate"] == "closing_duality"
    assert records[0]["passed"] == 2
    assert records[-1]["evaluations"] == report.evaluations
    assert "wall_time" not in records[-1]


@pytest.mark.parametrize(
    ("predicate", "bounds"),
    [
        ("adjunction", ExhaustiveBounds(ceiling=1)),
        ("grey_adjunction", ExhaustiveBounds(ceiling=1)),
        ("binary_sampling", ExhaustiveBounds(shape=(3, 3), ceiling=1)),
    ],
)
def test_exhaustive_checks_pass(predicate, bounds):
    report = exhaustive_small(predicate, bounds, SETTINGS)
    assert report.passed, report.render()
    assert report.evaluations > 0


def test_exhaustive_counts_every_case():
    report = exhaustive_small("grey_adjunction", ExhaustiveBounds(ceiling=1), SETTINGS)
    assert report.evaluations == 2**8


def test_exhaustive_refuses_oversized_bounds():
    with pytest.raises(BoundsTooLargeError):
        exhaustive_small("grey_adjunction", ExhaustiveBounds(ceiling=3), Settings(evaluation_limit=10))


def test_exhaustive_on_an_empty_box():
    report = exhaustive_small("adjunction", ExhaustiveBounds(shape=(0, 2)), SETTINGS)
    assert report.evaluations == 0
    assert report.passed


def test_exhaustive_rejects_unknown_predicates():
    with pytest.raises(UnknownPredicateError):
        exhaustive_small("opening", ExhaustiveBounds(), SETTINGS)


def test_full_pooling_adjunction_on_a_two_by_two_box():
    # 4^4 images f against 5^4 partial g on the reachable sieve points
    report = exhaustive_small("adjunction", ExhaustiveBounds(shape=(2, 2), ceiling=3), SETTINGS)
    assert report.evaluations == 160_000
    assert report.passed, report.render()


def test_canonical_config_falls_back_when_the_ceiling_is_tight(sieve2):
    spec = FilterSpec.build(builtin("k2", 15), sieve2)
    config = TrialConfig.canonical(spec, trials=3, image_size=(6, 6), suite=["open_close_oracle"])
    assert (config.value_min, config.value_max) == (0, 15)
    assert not config.clamp_free
    report = run_suite(config, SETTINGS)
    assert report.failures == 0
    assert set(report.tallies) == {"open_close_oracle.open", "open_close_oracle.close"}
