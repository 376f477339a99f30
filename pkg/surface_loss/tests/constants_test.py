import pytest

from surface_loss.constants import (
    EPSILON_0,
    INTERFACE,
    INTERFACE_ORDER,
    QUOTED_BACKGROUND_Q,
    QUOTED_SUBSTRATE_LOSS_TANGENT,
    REFERENCE_DESIGN,
)


def test_background_q_matches_loss_tangent():
    assert 1.0 / QUOTED_SUBSTRATE_LOSS_TANGENT == pytest.approx(QUOTED_BACKGROUND_Q, rel=0.15)


def test_enumerations():
    assert INTERFACE.SV == "SV"
    assert list(INTERFACE) == INTERFACE_ORDER
    assert "Skeleton" in REFERENCE_DESIGN
    assert "Bone" not in REFERENCE_DESIGN


def test_vacuum_permittivity():
    assert EPSILON_0 == pytest.approx(8.8541878128e-12, rel=1e-9)
