import json
from os.path import join

import pytest

from surface_loss.exception import ReportError
from surface_loss.export.json_export import JsonExporter
from surface_loss.export.text_export import render_fit_report
from surface_loss.lossfit.bootstrap import bootstrap
from surface_loss.lossfit.fit import fit
from surface_loss.lossfit.model import LossModel
from surface_loss.lossfit.report import REPORT_FORMAT, build_fit_report, load_fit_report, plot_curve, points_rows
from surface_loss.tests.constants import TRUTH_Q_BULK, TRUTH_X_SV, WIDE_SPREAD_R_SV
from surface_loss.tests.utilities import make_vector, noiseless_observations, sv_vectors, truth_parameters, write_text


@pytest.fixture(scope="module")
def sv_fit():
    model = LossModel(["SV"], include_bulk=True)
    observations = noiseless_observations(sv_vectors(WIDE_SPREAD_R_SV), truth_parameters())
    result = fit(observations, model)
    result.bootstrap = bootstrap(observations, model, 100, seed=0)
    return result


def round_trip(document):
    return json.loads(JsonExporter.dumps(document))


def test_report_round_trip(tmp_path, sv_fit):
    path = join(str(tmp_path), "fit_report.json")
    JsonExporter.write(path, build_fit_report(sv_fit, {"measurements": {"path": "m.csv", "sha256": "abc"}}))
    report = load_fit_report(path)

    assert report["format"] == REPORT_FORMAT
    assert report["x_m"]["SV"] == pytest.approx(TRUTH_X_SV, rel=1e-6)
    assert report["Q_bulk"] == pytest.approx(TRUTH_Q_BULK, rel=1e-6)
    assert report["tan_delta_bulk"] == pytest.approx(1.0 / TRUTH_Q_BULK, rel=1e-6)
    assert report["confidence"] == 0.9
    assert list(report["confidence_intervals"]) == ["SV", "bulk"]
    assert report["covariance"]["parameters"] == ["SV", "bulk"]
    assert len(report["devices"]) == 12
    assert [entry["design"] for entry in report["designs"]] == ["Hero", "ExtendedHero", "Guard", "Skeleton"]
    assert all(entry["devices"] == 3 for entry in report["designs"])
    assert report["identifiability"]["correlation_kind"] == "pearson"


def test_render_fit_report(sv_fit):
    text = render_fit_report(round_trip(build_fit_report(sv_fit, {"measurements": {"path": "m.csv", "sha256": "abc"}})))

    assert text.startswith("Surface loss fit report")
    assert "Model: channels SV; bulk term: yes" in text
    assert "Parameters (90% bootstrap intervals):" in text
    assert "  x_SV = " in text
    assert "Q_bulk = " in text
    assert "Measurements: m.csv (sha256 abc)" in text
    assert "cannot resolve" not in text


def test_render_without_bootstrap():
    model = LossModel(["SV"], include_bulk=True)
    result = fit(noiseless_observations(sv_vectors(WIDE_SPREAD_R_SV), truth_parameters()), model)
    report = round_trip(build_fit_report(result))

    assert report["confidence"] is None
    assert report["confidence_intervals"] == {}
    text = render_fit_report(report)
    assert "Parameters:" in text
    assert "bootstrap intervals" not in text


def test_render_unresolvable_channels():
    vectors = [make_vector(name, sm=value, sv=2.0 * value) for name, value in zip("abc", [1e3, 1e4, 1e5])]
    result = fit(noiseless_observations(vectors, truth_parameters(x_sm=1e-11)), LossModel(["SM", "SV"]))
    text = render_fit_report(round_trip(build_fit_report(result)))
    assert "The data cannot resolve whether substrate-metal or substrate-vacuum loss dominates" in text


def test_render_unbounded_and_singular(sv_fit):
    report = round_trip(build_fit_report(sv_fit))
    report["Q_bulk"] = None
    report["identifiability"]["condition_number"] = None
    text = render_fit_report(report)
    assert "Q_bulk = unbounded" in text
    assert "Condition number of the weighted design matrix: infinite" in text


def test_render_malformed_report():
    with pytest.raises(ReportError):
        render_fit_report({})
    with pytest.raises(ReportError):
        render_fit_report({"model": {}, "identifiability": {}, "devices": [], "x_m": None})


@pytest.mark.parametrize(
    "lines, match",
    [
        (['{"format": "surface_loss.fit_report",'], "position"),
        (["[1, 2, 3]"], "JSON object"),
        (['{"format": "surface_loss.fit_report"}'], "missing"),
    ],
    ids=["truncated", "not-an-object", "missing-keys"],
)
def test_load_malformed_report(tmp_path, lines, match):
    path = write_text(str(tmp_path), "fit_report.json", lines)
    with pytest.raises(ReportError, match=match):
        load_fit_report(path)


def test_load_report_with_other_format(tmp_path, sv_fit):
    report = round_trip(build_fit_report(sv_fit))
    report["format"] = "something.else"
    path = join(str(tmp_path), "fit_report.json")
    JsonExporter.write(path, report)
    with pytest.raises(ReportError, match="format"):
        load_fit_report(path)

    with pytest.raises(ReportError):
        load_fit_report(join(str(tmp_path), "absent.json"))


def test_plot_curve(sv_fit):
    rows = plot_curve(sv_fit.parameters, "SV")
    assert len(rows) == 61
    assert rows[0][0] == pytest.approx(1e-8)
    assert rows[-1][0] == pytest.approx(1e-2)

    # Surface loss dominates at small 1/r and the background at large 1/r
    assert rows[0][1] == pytest.approx(rows[0][2], rel=1e-2)
    assert rows[-1][1] == pytest.approx(TRUTH_Q_BULK, rel=1e-2)
    assert all(row[3] == pytest.approx(TRUTH_Q_BULK, rel=1e-6) for row in rows)
    assert all(row[1] <= min(row[2], row[3]) for row in rows)

    assert plot_curve(sv_fit.parameters) == rows
    with pytest.raises(ReportError):
        plot_curve(sv_fit.parameters, "MV")


def test_points_rows(sv_fit):
    rows = points_rows(sv_fit)
    assert len(rows) == 12
    qubit_id, design, wafer, _, _, inverse_sensitivity, q = rows[0]
    assert design == "Hero"
    assert wafer == "W1"
    assert inverse_sensitivity == pytest.approx(1.0 / WIDE_SPREAD_R_SV[0])
    assert q == sv_fit.observations[0].q
