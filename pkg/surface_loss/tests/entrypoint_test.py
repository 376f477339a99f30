import json
from os.path import exists, join

import pytest

from surface_loss import entrypoint
from surface_loss.constants import INTERFACE_ORDER
from surface_loss.participation.sensitivity import DesignSensitivity, SensitivityVector
from surface_loss.tests.constants import (
    DATA_ERROR,
    NUMERICAL_ERROR,
    SUCCESS,
    TRUTH_BULK,
    TRUTH_X_SV,
    USAGE_ERROR,
    WIDE_SPREAD_R_SV,
)
from surface_loss.tests.utilities import make_vector, read_text, sv_vectors, write_sensitivity_file, write_text


@pytest.fixture
def sensitivity_file(tmp_path):
    return write_sensitivity_file(str(tmp_path), sv_vectors(WIDE_SPREAD_R_SV))


def synth(sensitivity_path, output_directory, *options):
    return entrypoint.run(
        ["synth", sensitivity_path, "--frequency-ghz", "5", "--out", output_directory, "--quiet"] + list(options)
    )


def test_synth_then_fit_recovers_truth(tmp_path, sensitivity_file):
    directory = str(tmp_path)
    assert synth(sensitivity_file, directory, "--sigma", "0", "--per-design", "3") == SUCCESS

    measurements = join(directory, "measurements.csv")
    arguments = ["fit", measurements, sensitivity_file, "--bootstrap", "0", "--out", directory, "--quiet"]
    assert entrypoint.run(arguments) == SUCCESS

    with open(join(directory, "fit_report.json")) as handle:
        report = json.load(handle)
    assert report["x_m"]["SV"] == pytest.approx(TRUTH_X_SV, rel=1e-6)
    assert report["b"] == pytest.approx(TRUTH_BULK, rel=1e-6)
    assert report["bootstrap"] is None
    assert len(report["devices"]) == 12
    assert report["provenance"]["measurements"]["layout"] == "wide"

    assert exists(join(directory, "fit_plot.csv"))
    assert len(read_text(join(directory, "fit_points.csv")).splitlines()) == 13


def test_synth_is_reproducible(tmp_path, sensitivity_file):
    first, second = str(tmp_path / "first"), str(tmp_path / "second")
    assert synth(sensitivity_file, first, "--seed", "5") == SUCCESS
    assert synth(sensitivity_file, second, "--seed", "5") == SUCCESS
    assert read_text(join(first, "measurements.csv")) == read_text(join(second, "measurements.csv"))


def test_fit_report_is_reproducible(tmp_path, sensitivity_file):
    directory = str(tmp_path)
    assert synth(sensitivity_file, directory) == SUCCESS
    measurements = join(directory, "measurements.csv")

    reports = []
    for name in ("first", "second"):
        output = join(directory, name)
        arguments = ["fit", measurements, sensitivity_file, "--bootstrap", "200", "--out", output, "--quiet"]
        assert entrypoint.run(arguments) == SUCCESS
        reports.append(read_text(join(output, "fit_report.json")))
    assert reports[0] == reports[1]

    report = json.loads(reports[0])
    assert report["bootstrap"]["resamples"] == 200
    assert list(report["confidence_intervals"]) == ["SV", "bulk"]


def test_fit_with_xlsx_export(tmp_path, sensitivity_file):
    directory = str(tmp_path)
    assert synth(sensitivity_file, directory) == SUCCESS
    arguments = [
        "fit", join(directory, "measurements.csv"), sensitivity_file,
        "--bootstrap", "0", "--export", "xlsx", "--out", directory, "--quiet",
    ]
    assert entrypoint.run(arguments) == SUCCESS
    assert exists(join(directory, "surface_loss.xlsx"))


def test_report_states_unresolvable_channels(tmp_path, capsys):
    directory = str(tmp_path)
    vectors = [make_vector(name, sm=value, sv=2.0 * value) for name, value in zip(["Hero", "Guard", "Skeleton"], [1e3, 1e4, 1e5])]
    sensitivity_path = write_sensitivity_file(directory, vectors)
    assert synth(sensitivity_path, directory, "--truth-x-sm", "1e-11", "--truth-x-sv", "0") == SUCCESS

    arguments = [
        "fit", join(directory, "measurements.csv"), sensitivity_path,
        "--channels", "SM,SV", "--bootstrap", "0", "--out", directory, "--quiet",
    ]
    assert entrypoint.run(arguments) == SUCCESS

    capsys.readouterr()
    assert entrypoint.run(["report", join(directory, "fit_report.json")]) == SUCCESS
    output = capsys.readouterr().out
    assert "The data cannot resolve whether substrate-metal or substrate-vacuum loss dominates" in output

    assert entrypoint.run(["report", join(directory, "fit_report.json"), "--out", directory, "--quiet"]) == SUCCESS
    assert "cannot resolve" in read_text(join(directory, "report.txt"))


def test_corrupted_report(tmp_path):
    path = write_text(str(tmp_path), "fit_report.json", ['{"format": "surface_loss.fit_report", "x_m": '])
    assert entrypoint.run(["report", path, "--quiet"]) == DATA_ERROR


def test_select(tmp_path):
    directory = str(tmp_path)
    vectors = [make_vector("a", sm=1.0), make_vector("b", sv=1.0), make_vector("c", sm=1.0, sv=1.0)]
    sensitivity_path = write_sensitivity_file(directory, vectors)
    assert entrypoint.run(["select", sensitivity_path, "--k", "2", "--out", directory, "--quiet"]) == SUCCESS
    assert read_text(join(directory, "selection.txt")).startswith("Selected designs: a, b\n")

    assert entrypoint.run(["select", sensitivity_path, "--out", directory, "--quiet"]) == USAGE_ERROR
    assert entrypoint.run(["select", sensitivity_path, "--k", "5", "--out", directory, "--quiet"]) == DATA_ERROR


@pytest.mark.parametrize(
    "arguments",
    [
        ["synth", "sensitivities.csv"],
        ["fit", "measurements.csv"],
        ["unknown"],
        ["participation", "--design", "Nonexistent"],
        ["participation"],
        ["fit", "measurements.csv", "sensitivities.csv", "--channels", "XX"],
    ],
    ids=["synth-frequency", "fit-inputs", "command", "design-name", "no-designs", "channel"],
)
def test_usage_errors(tmp_path, arguments):
    assert entrypoint.run(arguments + ["--out", str(tmp_path), "--quiet"]) == USAGE_ERROR


def test_missing_inputs(tmp_path, sensitivity_file):
    directory = str(tmp_path)
    arguments = ["fit", join(directory, "absent.csv"), sensitivity_file, "--out", directory, "--quiet"]
    assert entrypoint.run(arguments) == DATA_ERROR


def test_participation(tmp_path):
    directory = str(tmp_path)
    arguments = ["participation", "--design", "Hero", "--levels", "1", "--dump-fields", "--out", directory, "--quiet"]
    assert entrypoint.run(arguments) == SUCCESS

    lines = read_text(join(directory, "sensitivities.csv")).splitlines()
    assert lines[0].startswith("design,r_SM_per_m,r_SV_per_m,r_MV_per_m")
    assert lines[1].startswith("Hero,")
    assert exists(join(directory, "fields_Hero_0.csv"))

    with open(join(directory, "convergence.json")) as handle:
        convergence = json.load(handle)
    assert convergence["levels"] == 1
    assert convergence["designs"][0]["design"] == "Hero"


def unreliable_sensitivity(design, layers, levels, base_level):
    vector = SensitivityVector(design.name, {interface: 1e3 for interface in INTERFACE_ORDER}, reliable=False)
    return DesignSensitivity(vector, [], [])


def test_unreliable_extrapolation(tmp_path, monkeypatch):
    monkeypatch.setattr(entrypoint, "design_sensitivity", unreliable_sensitivity)
    directory = str(tmp_path)
    arguments = ["participation", "--design", "Guard", "--out", directory, "--quiet"]

    assert entrypoint.run(arguments) == NUMERICAL_ERROR
    assert entrypoint.run(arguments + ["--force"]) == SUCCESS
    assert exists(join(directory, "sensitivities.csv"))


def test_fit_rejects_designs_without_sensitivities(tmp_path, sensitivity_file, capsys):
    directory = str(tmp_path)
    assert synth(sensitivity_file, directory, "--sigma", "0", "--per-design", "9") == SUCCESS
    measurements = join(directory, "measurements.csv")
    partial = write_sensitivity_file(directory, sv_vectors(WIDE_SPREAD_R_SV[:2]), "partial.csv")

    arguments = ["fit", measurements, partial, "--bootstrap", "0", "--out", directory, "--quiet"]
    capsys.readouterr()
    assert entrypoint.run(arguments) == DATA_ERROR
    error = capsys.readouterr().err
    assert "Guard, Skeleton" in error
    assert "--skip-unmatched" in error
    assert not exists(join(directory, "fit_report.json"))

    with pytest.warns(RuntimeWarning, match="skipped: Guard, Skeleton"):
        assert entrypoint.run(arguments + ["--skip-unmatched"]) == SUCCESS
    with open(join(directory, "fit_report.json")) as handle:
        report = json.load(handle)
    assert len(report["devices"]) == 18
    assert {device["design"] for device in report["devices"]} == {"Hero", "ExtendedHero"}


@pytest.mark.slow
def test_participation_skeleton_converges(tmp_path):
    directory = str(tmp_path)
    assert entrypoint.run(["participation", "--design", "Skeleton", "--out", directory, "--quiet"]) == SUCCESS

    with open(join(directory, "convergence.json")) as handle:
        convergence = json.load(handle)
    assert convergence["designs"][0]["design"] == "Skeleton"
    assert convergence["designs"][0]["reliable"] is True
    assert all(value > 0 for value in convergence["designs"][0]["r_per_m"].values())


def test_participation_is_byte_identical(tmp_path):
    outputs = []
    for name in ("first", "second"):
        directory = str(tmp_path / name)
        arguments = ["participation", "--design", "Hero", "--levels", "1", "--out", directory, "--quiet"]
        assert entrypoint.run(arguments) == SUCCESS
        outputs.append(
            (read_text(join(directory, "sensitivities.csv")), read_text(join(directory, "convergence.json")))
        )
    assert outputs[0] == outputs[1]


def test_select_and_report_are_byte_identical(tmp_path, sensitivity_file):
    directory = str(tmp_path)
    assert synth(sensitivity_file, directory) == SUCCESS
    fit_arguments = [
        "fit", join(directory, "measurements.csv"), sensitivity_file, "--bootstrap", "0", "--out", directory, "--quiet"
    ]
    assert entrypoint.run(fit_arguments) == SUCCESS

    selections, reports = [], []
    for name in ("first", "second"):
        output = join(directory, name)
        assert entrypoint.run(["select", sensitivity_file, "--k", "2", "--out", output, "--quiet"]) == SUCCESS
        assert entrypoint.run(["report", join(directory, "fit_report.json"), "--out", output, "--quiet"]) == SUCCESS
        selections.append(read_text(join(output, "selection.txt")))
        reports.append(read_text(join(output, "report.txt")))
    assert selections[0] == selections[1]
    assert reports[0] == reports[1]
