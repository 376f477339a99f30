import pytest

from surface_loss.exception import MeasurementError, MeasurementParsingError
from surface_loss.export.csv_export import MeasurementCsvExporter
from surface_loss.measurements.loader import load_csv
from surface_loss.measurements.measurement import Ensemble, QubitMeasurement
from surface_loss.measurements.synthesis import synthesize
from surface_loss.tests.constants import LONG_HEADER, QUBIT_FREQUENCY, WIDE_HEADER, WIDE_SPREAD_R_SV
from surface_loss.tests.utilities import sv_vectors, truth_parameters, write_text
from surface_loss.utilities import hash_file


def test_wide_layout(tmp_path):
    path = write_text(
        str(tmp_path),
        "measurements.csv",
        [WIDE_HEADER, "Q1,W1,EFG,acetone,Hero,5,100,5,10", "Q2,W2,HEM,piranha,Guard,4.75,80.5,,3"],
    )
    ensemble = load_csv(path)

    first, second = ensemble
    assert first.frequency == 5e9
    assert first.t1_mean == pytest.approx(100e-6)
    assert first.t1_std == pytest.approx(5e-6)
    assert first.n_samples == 10
    assert second.t1_std == 0.0
    assert second.frequency == pytest.approx(4.75e9)
    assert ensemble.provenance["layout"] == "wide"
    assert ensemble.provenance["sha256"] == hash_file(path)
    assert ensemble.provenance["latest_sample"] is None


def test_long_layout(tmp_path):
    path = write_text(
        str(tmp_path),
        "measurements.csv",
        [
            LONG_HEADER,
            "Q1,W1,EFG,acetone,Hero,5,2024-03-01T10:00:00,90",
            "Q2,W1,EFG,acetone,Guard,5,2024-03-01T11:00:00,60",
            "Q1,W1,EFG,acetone,Hero,5,2024-03-02T10:00:00,110",
            "Q1,W1,EFG,acetone,Hero,5,2024-03-01T12:00:00,100",
        ],
    )
    ensemble = load_csv(path)

    assert [device.qubit_id for device in ensemble] == ["Q1", "Q2"]
    q1 = ensemble.by_id("Q1")
    assert q1.n_samples == 3
    assert q1.t1_mean == pytest.approx(100e-6)
    assert q1.t1_std == pytest.approx(10e-6)
    assert q1.timestamped
    assert ensemble.timestamped
    assert ensemble.provenance["layout"] == "long"
    assert ensemble.provenance["latest_sample"] == "2024-03-02T10:00:00"

    # A single sample gives a zero spread
    assert ensemble.by_id("Q2").t1_std == 0.0


def test_custom_designs(tmp_path):
    header = WIDE_HEADER + ",custom"
    path = write_text(str(tmp_path), "measurements.csv", [header, "Q1,W1,EFG,acetone,Mine,5,100,5,10,true"])
    assert load_csv(path)[0].custom

    path = write_text(str(tmp_path), "unknown.csv", [header, "Q1,W1,EFG,acetone,Mine,5,100,5,10,false"])
    with pytest.raises(MeasurementParsingError) as error:
        load_csv(path)
    assert error.value.line_number == 2

    assert len(load_csv(path, known_designs=["Mine"])) == 1


@pytest.mark.parametrize(
    "lines, line_number",
    [
        (["qubit_id,wafer,t1_us", "Q1,W1,100"], 1),
        ([WIDE_HEADER, "Q1,W1,EFG,acetone,Hero,5,100,5,10", "Q2,W1,sapphire,acetone,Hero,5,100,5,10"], 3),
        ([WIDE_HEADER, "Q1,W1,EFG,acetone,Hero,5,-100,5,10"], 2),
        ([WIDE_HEADER, "Q1,W1,EFG,acetone,Hero,5,abc,5,10"], 2),
        ([WIDE_HEADER, "Q1,W1,EFG,acetone,Hero,5,100,5,ten"], 2),
        ([WIDE_HEADER, "Q1,,EFG,acetone,Hero,5,100,5,10"], 2),
        ([WIDE_HEADER, "Q1,W1,EFG,acetone,Hero,5,100,5,10", "Q1,W2,EFG,acetone,Hero,5,100,5,10"], 3),
        ([WIDE_HEADER, "Q1,W1,EFG,acetone,Hero,0,100,5,10"], 2),
        (
            [
                LONG_HEADER,
                "Q1,W1,EFG,acetone,Hero,5,2024-03-01T10:00:00,90",
                "Q1,W2,EFG,acetone,Hero,5,2024-03-01T11:00:00,95",
            ],
            3,
        ),
        ([LONG_HEADER, "Q1,W1,EFG,acetone,Hero,5,yesterday,90"], 2),
        ([WIDE_HEADER], None),
    ],
    ids=[
        "no-layout",
        "substrate",
        "negative-t1",
        "text-t1",
        "sample-count",
        "missing-wafer",
        "duplicate-id",
        "zero-frequency",
        "conflicting-metadata",
        "timestamp",
        "no-devices",
    ],
)
def test_parsing_errors(tmp_path, lines, line_number):
    path = write_text(str(tmp_path), "measurements.csv", lines)
    with pytest.raises(MeasurementParsingError) as error:
        load_csv(path)
    assert error.value.line_number == line_number


def test_conflict_names_the_column(tmp_path):
    path = write_text(
        str(tmp_path),
        "measurements.csv",
        [
            LONG_HEADER,
            "Q1,W1,EFG,acetone,Hero,5,2024-03-01T10:00:00,90",
            "Q1,W1,EFG,acetone,Guard,5,2024-03-01T11:00:00,95",
        ],
    )
    with pytest.raises(MeasurementParsingError, match="Conflicting design"):
        load_csv(path)


def test_missing_file(tmp_path):
    with pytest.raises(MeasurementError):
        load_csv(str(tmp_path / "absent.csv"))


def test_wide_export_round_trip(tmp_path):
    ensemble = synthesize(sv_vectors(WIDE_SPREAD_R_SV), truth_parameters(), 0.2, QUBIT_FREQUENCY, seed=4)
    path = str(tmp_path / "measurements.csv")
    MeasurementCsvExporter.write_measurements(path, ensemble)
    assert load_csv(path) == ensemble


def test_custom_export_round_trip(tmp_path):
    names = ["Mine", "Yours"]
    ensemble = synthesize(sv_vectors([1e4, 5e4], names), truth_parameters(), 0.2, QUBIT_FREQUENCY, devices=6)
    assert all(device.custom for device in ensemble)

    path = str(tmp_path / "measurements.csv")
    MeasurementCsvExporter.write_measurements(path, ensemble)
    assert load_csv(path) == ensemble


def test_long_export_round_trip(tmp_path):
    devices = [
        QubitMeasurement.from_samples(
            f"Q{index}",
            "W1",
            "EFG",
            "acetone",
            "Hero",
            5.25e9,
            [("2024-03-01T10:00:00", 90.25e-6 + index * 1e-6), ("2024-03-01T11:00:00", 101.5e-6)],
        )
        for index in range(3)
    ]
    ensemble = Ensemble(devices)
    path = str(tmp_path / "measurements.csv")
    MeasurementCsvExporter.write_measurements(path, ensemble)

    loaded = load_csv(path)
    assert loaded.provenance["layout"] == "long"
    assert loaded == ensemble
