import pytest

from surface_loss.exception import FitError
from surface_loss.interface import create_observations
from surface_loss.lossfit.bootstrap import bootstrap
from surface_loss.lossfit.fit import fit
from surface_loss.lossfit.model import LossModel
from surface_loss.measurements.synthesis import synthesize
from surface_loss.tests.constants import (
    NARROW_SPREAD_R_SV,
    QUBIT_FREQUENCY,
    TRUTH_BULK,
    TRUTH_X_SV,
    WIDE_SPREAD_R_SV,
)
from surface_loss.tests.utilities import noiseless_observations, sv_vectors, truth_parameters


def sv_model():
    return LossModel(["SV"], include_bulk=True)


def noisy_observations(r_sv, sigma, seed, per_design=10):
    vectors = sv_vectors(r_sv)
    ensemble = synthesize(vectors, truth_parameters(), sigma, QUBIT_FREQUENCY, per_design=per_design, seed=seed)
    return create_observations(ensemble, vectors)


def test_bootstrap_is_deterministic():
    observations = noisy_observations(WIDE_SPREAD_R_SV, 0.2, seed=3)

    first = bootstrap(observations, sv_model(), 200, seed=7)
    second = bootstrap(observations, sv_model(), 200, seed=7)
    threaded = bootstrap(observations, sv_model(), 200, seed=7, workers=4)
    other_seed = bootstrap(observations, sv_model(), 200, seed=8)

    assert first.intervals == second.intervals
    assert first.intervals == threaded.intervals
    assert first.intervals != other_seed.intervals


def test_bootstrap_intervals():
    observations = noisy_observations(WIDE_SPREAD_R_SV, 0.2, seed=5)
    result = bootstrap(observations, sv_model(), 300, confidence=0.9, seed=1)

    assert result.resamples == 300
    assert result.failed == 0
    assert list(result.intervals) == ["SV", "bulk"]
    for low, high in result.intervals.values():
        assert 0.0 <= low <= high

    # A wider confidence level gives wider intervals from the same resamples
    wide = bootstrap(observations, sv_model(), 300, confidence=0.99, seed=1)
    for name, (low, high) in result.intervals.items():
        assert wide.intervals[name][0] <= low
        assert wide.intervals[name][1] >= high

    document = result.to_dict()
    assert document["resamples"] == 300
    assert document["seed"] == 1
    assert document["intervals"]["SV"] == list(result.intervals["SV"])


def test_noiseless_bootstrap_collapses_on_truth():
    observations = noiseless_observations(sv_vectors(WIDE_SPREAD_R_SV), truth_parameters())
    result = bootstrap(observations, sv_model(), 100, seed=0)
    low, high = result.intervals["SV"]
    assert low == pytest.approx(TRUTH_X_SV, rel=1e-6)
    assert high == pytest.approx(TRUTH_X_SV, rel=1e-6)


@pytest.mark.parametrize(
    "resamples, devices, confidence",
    [(99, 12, 0.9), (100, 4, 0.9), (100, 12, 0.0), (100, 12, 1.0)],
    ids=["few-resamples", "few-devices", "zero-confidence", "full-confidence"],
)
def test_bootstrap_errors(resamples, devices, confidence):
    observations = noiseless_observations(sv_vectors(WIDE_SPREAD_R_SV), truth_parameters())[:devices]
    with pytest.raises(FitError):
        bootstrap(observations, sv_model(), resamples, confidence)


def test_recovery_at_quoted_scatter():
    # Both parameters within 25% in at least 80 of 100 synthetic ensembles with 20% lognormal scatter
    recovered = 0
    for seed in range(100):
        result = fit(noisy_observations(WIDE_SPREAD_R_SV, 0.2, seed), sv_model())
        if (
            abs(result.values["SV"] / TRUTH_X_SV - 1.0) < 0.25
            and abs(result.values["bulk"] / TRUTH_BULK - 1.0) < 0.25
        ):
            recovered += 1
    assert recovered >= 80


@pytest.mark.slow
def test_interval_coverage():
    trials = 200
    covered = {"SV": 0, "bulk": 0}
    truth = {"SV": TRUTH_X_SV, "bulk": TRUTH_BULK}
    for seed in range(trials):
        vectors = sv_vectors(NARROW_SPREAD_R_SV)
        ensemble = synthesize(vectors, truth_parameters(), 0.05, QUBIT_FREQUENCY, seed=seed)
        result = bootstrap(create_observations(ensemble, vectors), sv_model(), 400, seed=seed)
        for name, (low, high) in result.intervals.items():
            if low <= truth[name] <= high:
                covered[name] += 1

    for name in covered:
        assert covered[name] / trials >= 0.80
