import pytest

from surface_loss import interface
from surface_loss.export.csv_export import MeasurementCsvExporter
from surface_loss.geometry.design import DesignSpec, save_geometry
from surface_loss.tests.constants import QUBIT_FREQUENCY, TRUTH_Q_BULK, TRUTH_X_SV, WIDE_SPREAD_R_SV
from surface_loss.tests.utilities import strip_section, sv_vectors, write_sensitivity_file


def test_synthesize_and_fit(tmp_path):
    vectors = sv_vectors(WIDE_SPREAD_R_SV)
    ensemble = interface.synthesize_ensemble(vectors, {"SV": TRUTH_X_SV}, TRUTH_Q_BULK, 0.0, QUBIT_FREQUENCY, devices=12)

    path = str(tmp_path / "measurements.csv")
    MeasurementCsvExporter.write_measurements(path, ensemble)
    loaded = interface.load_measurements(path)
    sensitivities = interface.load_sensitivities(write_sensitivity_file(str(tmp_path), vectors))

    model = interface.create_model()
    result = interface.fit_ensemble(loaded, sensitivities, model, resamples=100)
    assert result.values["SV"] == pytest.approx(TRUTH_X_SV, rel=1e-6)
    assert result.bootstrap.resamples == 100

    prediction = interface.predict_quality(result, vectors[0], QUBIT_FREQUENCY)
    assert prediction.q == pytest.approx(loaded[0].q, rel=1e-6)

    parameters = interface.create_parameters(model, {"SV": TRUTH_X_SV, "bulk": 1.0 / TRUTH_Q_BULK})
    assert parameters.q_bulk == pytest.approx(TRUTH_Q_BULK)


def test_create_observations_skips_unknown_designs():
    vectors = sv_vectors(WIDE_SPREAD_R_SV)
    ensemble = interface.synthesize_ensemble(vectors, {"SV": TRUTH_X_SV}, None, 0.1, QUBIT_FREQUENCY, devices=8)
    with pytest.warns(RuntimeWarning, match="Guard, Skeleton"):
        observations = interface.create_observations(ensemble, vectors[:2])
    assert len(observations) == 4
    assert {observation.design for observation in observations} == {"Hero", "ExtendedHero"}
    assert all(observation.weight == observation.q**2 for observation in observations)


def test_design_helpers(tmp_path):
    vectors = sv_vectors(WIDE_SPREAD_R_SV)
    assert interface.choose_designs(vectors, 2).designs == ["Hero", "Skeleton"]
    report = interface.check_identifiability(vectors, interface.create_model())
    assert not report.flagged

    path = str(tmp_path / "strips.json")
    design = DesignSpec("strips", [(strip_section(), 1e-3)])
    save_geometry(design, path)
    assert interface.load_design(path) == design


def test_compute_sensitivity():
    with pytest.warns(RuntimeWarning):
        vector = interface.compute_sensitivity("Hero", levels=1)
    assert vector.design == "Hero"
    assert all(value > 0.0 for value in vector.r.values())
