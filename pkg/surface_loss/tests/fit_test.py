import math

import numpy as np
import pytest

from surface_loss.exception import FitError, UsageError
from surface_loss.lossfit.fit import fit, wafer_weights
from surface_loss.lossfit.model import LossModel, LossParameters, Observation, angular_frequency, predict
from surface_loss.tests.constants import (
    QUBIT_FREQUENCY,
    TRUTH_BULK,
    TRUTH_Q_BULK,
    TRUTH_X_SV,
    WIDE_SPREAD_R_SV,
)
from surface_loss.tests.utilities import make_vector, noiseless_observations, sv_vectors, truth_parameters


def sv_model():
    return LossModel(["SV"], include_bulk=True)


def test_noiseless_recovery():
    observations = noiseless_observations(sv_vectors(WIDE_SPREAD_R_SV), truth_parameters())
    result = fit(observations, sv_model())

    assert result.values["SV"] == pytest.approx(TRUTH_X_SV, rel=1e-6)
    assert result.values["bulk"] == pytest.approx(TRUTH_BULK, rel=1e-6)
    assert result.parameters.q_bulk == pytest.approx(TRUTH_Q_BULK, rel=1e-6)
    assert result.free == {"SV": True, "bulk": True}
    assert result.degrees_of_freedom == len(observations) - 2
    assert result.residual_norm == pytest.approx(0.0, abs=1e-9)
    assert result.kkt_violation <= 1e-8
    assert not result.identifiability.ill_conditioned
    assert np.allclose(result.residuals, 0.0, atol=1e-15)


def test_noiseless_recovery_of_every_channel():
    vectors = [
        make_vector("A", 1e4, 2e3, 1e3),
        make_vector("B", 2e3, 3e4, 2e3),
        make_vector("C", 1e3, 1e3, 5e4),
        make_vector("D", 5e3, 5e3, 5e3),
    ]
    truth = truth_parameters(x_sv=1.6e-11, x_sm=4e-11, x_mv=1e-11)
    result = fit(noiseless_observations(vectors, truth), LossModel(["SM", "SV", "MV"], include_bulk=True))
    for name, value in truth.values.items():
        assert result.values[name] == pytest.approx(value, rel=1e-6)


def test_single_design_bounds_one_parameter():
    observations = noiseless_observations(sv_vectors(WIDE_SPREAD_R_SV[:1]), truth_parameters())
    result = fit(observations, sv_model())

    at_bound = [name for name, free in result.free.items() if not free]
    assert len(at_bound) == 1
    assert result.values[at_bound[0]] == 0.0
    assert result.standard_errors[at_bound[0]] is None
    assert np.all(np.isnan(result.covariance[result.model.parameters.index(at_bound[0])]))
    assert result.identifiability.ill_conditioned

    # The free parameter alone still reproduces the measured Q
    omega = angular_frequency(QUBIT_FREQUENCY)
    assert predict(result, observations[0].sensitivity, omega).q == pytest.approx(observations[0].q, rel=1e-9)


def test_underdetermined_fit():
    observations = noiseless_observations(sv_vectors(WIDE_SPREAD_R_SV[:1]), truth_parameters(), per_design=1)
    with pytest.raises(FitError):
        fit(observations, sv_model())


def test_all_zero_column():
    vectors = [make_vector("A", sm=1e4), make_vector("B", sm=2e4)]
    observations = noiseless_observations(vectors, truth_parameters(x_sm=1e-11))
    with pytest.raises(FitError):
        fit(observations, LossModel(["SM", "SV"], include_bulk=True))


def test_merged_channels():
    model = LossModel(["SM", "SV", "MV"], include_bulk=True, merge_channels=True)
    assert model.parameters == ["COMBINED", "bulk"]
    assert model.row(make_vector("A", 1.0, 2.0, 3.0)) == [6.0, 1.0]

    vectors = [make_vector(name, value, value, value) for name, value in zip("ABC", [1e3, 1e4, 1e5])]
    truth = truth_parameters(x_sv=1e-11, x_sm=1e-11, x_mv=1e-11)
    result = fit(noiseless_observations(vectors, truth), model)
    assert result.values["COMBINED"] == pytest.approx(1e-11, rel=1e-6)


def test_loss_model_errors():
    with pytest.raises(UsageError):
        LossModel(["XX"])
    with pytest.raises(UsageError):
        LossModel(["SV", "SV"])
    with pytest.raises(UsageError):
        LossModel([], include_bulk=False)
    with pytest.raises(FitError):
        LossParameters(sv_model(), {"SV": -1e-11})
    with pytest.raises(FitError):
        Observation(make_vector("A", sv=1.0), 0.0)


def test_wafer_weights():
    vector = make_vector("A", sv=1e4)
    observations = [
        Observation(vector, 1e6, wafer="W1"),
        Observation(vector, 1e6, wafer="W1"),
        Observation(vector, 2e6, wafer="W2"),
    ]
    weighted = wafer_weights(observations)
    assert [observation.weight for observation in weighted] == pytest.approx([0.75e12, 0.75e12, 6e12])
    assert weighted[0].weight + weighted[1].weight == pytest.approx(weighted[2].weight / 4.0)

    result = fit(
        noiseless_observations(sv_vectors(WIDE_SPREAD_R_SV), truth_parameters()), sv_model(), wafer_weighting=True
    )
    assert result.wafer_weighting
    assert result.values["SV"] == pytest.approx(TRUTH_X_SV, rel=1e-6)


def test_predict():
    model = LossModel([], include_bulk=True)
    omega = angular_frequency(QUBIT_FREQUENCY)
    prediction = predict(LossParameters(model, {"bulk": 1.0 / 3e6}), make_vector("A"), omega)
    assert prediction.q == pytest.approx(3e6)
    assert prediction.t1 == pytest.approx(95.49e-6, rel=1e-4)
    assert not prediction.unbounded


def test_predict_unbounded():
    omega = angular_frequency(QUBIT_FREQUENCY)
    prediction = predict(LossParameters(sv_model(), {}), make_vector("A", sv=1e4), omega)
    assert prediction.unbounded
    assert math.isinf(prediction.q)
    assert math.isinf(prediction.t1)

    with pytest.raises(FitError):
        predict(LossParameters(sv_model(), {}), make_vector("A"), 0.0)


SCATTER = [1.12, 0.91, 1.04]


def scattered(observations):
    return [
        Observation(o.sensitivity, o.q * SCATTER[index % len(SCATTER)], qubit_id=o.qubit_id, wafer=o.wafer)
        for index, o in enumerate(observations)
    ]


def test_sensitivity_scale_equivariance():
    observations = scattered(noiseless_observations(sv_vectors(WIDE_SPREAD_R_SV), truth_parameters()))
    scaled = [
        Observation(make_vector(o.design, sv=1e3 * o.sensitivity.r["SV"]), o.q, qubit_id=o.qubit_id, wafer=o.wafer)
        for o in observations
    ]

    base, larger = fit(observations, sv_model()), fit(scaled, sv_model())
    assert larger.values["SV"] == pytest.approx(base.values["SV"] / 1e3, rel=1e-9)
    assert larger.values["bulk"] == pytest.approx(base.values["bulk"], rel=1e-9)
    assert larger.residual_norm == pytest.approx(base.residual_norm, rel=1e-9)


def test_nested_models_never_raise_the_residual():
    vectors = [
        make_vector("A", 1e4, 2e3, 1e3),
        make_vector("B", 2e3, 3e4, 2e3),
        make_vector("C", 1e3, 1e3, 5e4),
        make_vector("D", 5e3, 5e3, 5e3),
    ]
    truth = truth_parameters(x_sv=1.6e-11, x_sm=4e-11, x_mv=1e-11)
    observations = scattered(noiseless_observations(vectors, truth))

    norms = [
        fit(observations, LossModel(channels, include_bulk=True)).residual_norm
        for channels in ([], ["SV"], ["SM", "SV"], ["SM", "SV", "MV"])
    ]
    for coarser, finer in zip(norms, norms[1:]):
        assert finer <= coarser * (1.0 + 1e-9)


def test_single_channel_without_bulk_is_the_weighted_slope():
    observations = scattered(noiseless_observations(sv_vectors(WIDE_SPREAD_R_SV), truth_parameters(bulk=0.0)))
    result = fit(observations, LossModel(["SV"], include_bulk=False))

    r = np.array([o.sensitivity.r["SV"] for o in observations])
    y = np.array([1.0 / o.q for o in observations])
    w = np.array([o.weight for o in observations])
    assert result.model.parameters == ["SV"]
    assert result.values["SV"] == pytest.approx(np.sum(w * r * y) / np.sum(w * r * r), rel=1e-9)

    exact = fit(noiseless_observations(sv_vectors(WIDE_SPREAD_R_SV), truth_parameters(bulk=0.0)), result.model)
    assert exact.values["SV"] == pytest.approx(TRUTH_X_SV, rel=1e-9)


def test_single_channel_fits_on_correlated_sensitivities_match():
    tilt = [1.0, 1.01, 0.99, 1.005]
    vectors = [
        make_vector(vector.design, sm=2.0 * factor * vector.r["SV"], sv=vector.r["SV"])
        for vector, factor in zip(sv_vectors(WIDE_SPREAD_R_SV), tilt)
    ]
    observations = scattered(noiseless_observations(vectors, truth_parameters()))

    sv_only = fit(observations, LossModel(["SV"], include_bulk=True))
    sm_only = fit(observations, LossModel(["SM"], include_bulk=True))

    assert sv_only.residual_norm > 0.0
    assert abs(sm_only.residual_norm - sv_only.residual_norm) < 0.05 * sv_only.residual_norm
    for result in (sv_only, sm_only):
        assert result.identifiability.correlations["SM/SV"] > 0.98
        assert ("SM", "SV") in result.identifiability.unresolvable_pairs
