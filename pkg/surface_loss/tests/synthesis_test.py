import numpy as np
import pytest

from surface_loss.exception import MeasurementError
from surface_loss.interface import create_observations
from surface_loss.lossfit.fit import fit
from surface_loss.lossfit.model import LossModel, angular_frequency, predict
from surface_loss.measurements.synthesis import synthesize
from surface_loss.tests.constants import (
    DESIGN_NAMES,
    QUBIT_FREQUENCY,
    TRUTH_BULK,
    TRUTH_X_SV,
    WIDE_SPREAD_R_SV,
)
from surface_loss.tests.utilities import make_vector, sv_vectors, truth_parameters


def test_ensemble_layout():
    ensemble = synthesize(sv_vectors(WIDE_SPREAD_R_SV), truth_parameters(), 0.2, QUBIT_FREQUENCY)

    assert len(ensemble) == 35
    assert ensemble[0].qubit_id == "Q001"
    assert ensemble[34].qubit_id == "Q035"
    assert [device.design for device in ensemble][:5] == DESIGN_NAMES + ["Hero"]
    assert [device.wafer for device in ensemble][:7] == ["W1", "W2", "W3", "W4", "W5", "W6", "W1"]
    assert ensemble.wafers == ["W1", "W2", "W3", "W4", "W5", "W6"]
    assert all(device.substrate == "EFG" and device.process == "acetone" for device in ensemble)
    assert all(device.frequency == QUBIT_FREQUENCY for device in ensemble)
    assert not any(device.custom for device in ensemble)
    assert ensemble.provenance == {"synthetic": True, "seed": 0, "sigma": 0.2}


def test_per_design_overrides_devices():
    ensemble = synthesize(sv_vectors(WIDE_SPREAD_R_SV), truth_parameters(), 0.2, QUBIT_FREQUENCY, per_design=10)
    assert len(ensemble) == 40
    assert all(sum(device.design == name for device in ensemble) == 10 for name in DESIGN_NAMES)


def test_noiseless_ensemble_matches_model():
    vectors = sv_vectors(WIDE_SPREAD_R_SV)
    ensemble = synthesize(vectors, truth_parameters(), 0.0, QUBIT_FREQUENCY)
    omega = angular_frequency(QUBIT_FREQUENCY)
    expected = {vector.design: predict(truth_parameters(), vector, omega).q for vector in vectors}
    for device in ensemble:
        assert device.q == pytest.approx(expected[device.design], rel=1e-12)


def test_seeded_ensembles_repeat():
    vectors = sv_vectors(WIDE_SPREAD_R_SV)
    first = synthesize(vectors, truth_parameters(), 0.2, QUBIT_FREQUENCY, seed=11)
    second = synthesize(vectors, truth_parameters(), 0.2, QUBIT_FREQUENCY, seed=11)
    other = synthesize(vectors, truth_parameters(), 0.2, QUBIT_FREQUENCY, seed=12)
    assert first == second
    assert first != other


def test_lognormal_scatter():
    vector = make_vector("Hero", sv=1e4)
    ensemble = synthesize([vector], truth_parameters(), 0.2, QUBIT_FREQUENCY, devices=4000, seed=2)
    true_q = predict(truth_parameters(), vector, angular_frequency(QUBIT_FREQUENCY)).q
    log_ratios = np.log([device.q / true_q for device in ensemble])
    assert np.std(log_ratios, ddof=1) == pytest.approx(0.2, rel=0.05)
    assert abs(np.mean(log_ratios)) < 0.02


@pytest.mark.parametrize("sigma", [0.1, 0.05, 0.01])
def test_fit_error_shrinks_with_scatter(sigma):
    vectors = sv_vectors(WIDE_SPREAD_R_SV)
    ensemble = synthesize(vectors, truth_parameters(), sigma, QUBIT_FREQUENCY, per_design=10, seed=0)
    result = fit(create_observations(ensemble, vectors), LossModel(["SV"], include_bulk=True))
    assert abs(result.values["SV"] / TRUTH_X_SV - 1.0) < 3.0 * sigma
    assert abs(result.values["bulk"] / TRUTH_BULK - 1.0) < 3.0 * sigma


@pytest.mark.parametrize(
    "keywords",
    [
        {"sigma": -0.1},
        {"sigma": float("nan")},
        {"frequency": 0.0},
        {"devices": 0},
        {"per_design": 0},
        {"wafers": 0},
    ],
)
def test_synthesis_errors(keywords):
    arguments = {"sigma": 0.2, "frequency": QUBIT_FREQUENCY}
    arguments.update(keywords)
    with pytest.raises(MeasurementError):
        synthesize(sv_vectors(WIDE_SPREAD_R_SV), truth_parameters(), **arguments)


def test_unbounded_design():
    with pytest.raises(MeasurementError):
        synthesize([make_vector("Hero")], truth_parameters(bulk=0.0), 0.2, QUBIT_FREQUENCY)
    with pytest.raises(MeasurementError):
        synthesize([], truth_parameters(), 0.2, QUBIT_FREQUENCY)
