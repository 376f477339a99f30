from surface_loss.measurements.measurement import Ensemble, QubitMeasurement
from surface_loss.output import (
    stringify_design_sensitivity,
    stringify_ensemble,
    stringify_frequency_groups,
    stringify_sensitivities,
)
from surface_loss.participation.participation import ParticipationReport
from surface_loss.participation.sensitivity import DesignSensitivity, SensitivityVector


def test_stringify_sensitivities():
    vectors = [
        SensitivityVector("Hero", {"SM": 1e3, "SV": 2e3, "MV": 3e3}),
        SensitivityVector("ExtendedHero", {"SV": 1e3}, reliable=False),
    ]
    lines = stringify_sensitivities(vectors).splitlines()

    assert len(lines) == 3
    assert lines[0].startswith("design      ")
    assert "r_SV (1/m)" in lines[0]
    assert lines[1].startswith("Hero ")
    assert "(unreliable extrapolation)" not in lines[1]
    assert lines[2].endswith("(unreliable extrapolation)")


def test_stringify_ensemble_and_groups():
    ensemble = Ensemble(
        [
            QubitMeasurement("Q1", "W1", "EFG", "acetone", "Hero", 5e9, 100e-6),
            QubitMeasurement("Q2", "W2", "EFG", "acetone", "Hero", 6e9, 50e-6),
        ]
    )
    assert stringify_ensemble(ensemble) == "Devices: 2\nDesigns: Hero\nWafers: W1, W2"

    lines = stringify_frequency_groups(ensemble.frequency_groups(), "  ").splitlines()
    assert lines[0] == "  Hero: 5 GHz, 1 device(s), mean Q 3.14159e+06, mean T1 100 us"
    assert lines[1].startswith("  Hero: 6 GHz")


def test_stringify_design_sensitivity():
    vector = SensitivityVector("Hero", {"SV": 2e3}, {"SM": 1.0, "SV": 2.0, "MV": 3.0})
    report = ParticipationReport("pads", 1e-12, {}, capacitance_pul=8e-12, levels=[0, 1, 2])
    lines = stringify_design_sensitivity(DesignSensitivity(vector, [report], []), "  ").splitlines()

    assert lines[0] == "  Design: Hero"
    assert lines[2] == "  r_SV (1/m): 2000.0 +/- 2.0"
    assert lines[4] == "  Section: pads (levels [0, 1, 2], reliable: True)"
    assert lines[5] == "  \tCapacitance (F/m): 8e-12"
