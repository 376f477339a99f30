import pytest

from surface_loss.exception import ExtrapolationError
from surface_loss.solver.extrapolation import extrapolate


def test_extrapolate_first_order_sequence():
    result = extrapolate([2.0, 1.5, 1.25])
    assert result.value == pytest.approx(1.0)
    assert result.error == pytest.approx(0.25)
    assert result.ratio == pytest.approx(0.5)
    assert result.order == pytest.approx(1.0)
    assert result.reliable
    assert result.finest == 1.25


def test_extrapolate_second_order_sequence():
    # value 3 + 4 h^2 with h halving
    result = extrapolate([7.0, 4.0, 3.25])
    assert result.value == pytest.approx(3.0)
    assert result.order == pytest.approx(2.0)
    assert result.reliable


def test_extrapolate_uses_last_three_levels():
    assert extrapolate([100.0, 2.0, 1.5, 1.25]).value == pytest.approx(1.0)


def test_extrapolate_constant_sequence():
    result = extrapolate([5.0, 5.0, 5.0])
    assert result.value == 5.0
    assert result.error == 0.0
    assert result.reliable


@pytest.mark.parametrize("values", [[1.0, 2.0, 1.5], [1.0, 2.0, 4.0], [1.0, 1.0, 2.0]])
def test_extrapolate_flags_unreliable_sequences(values):
    result = extrapolate(values)
    assert not result.reliable
    assert result.value == values[-1]
    assert result.error == pytest.approx(abs(values[-1] - values[-2]))


def test_extrapolate_needs_three_levels():
    with pytest.raises(ExtrapolationError):
        extrapolate([1.0, 2.0])


def test_extrapolation_to_dict():
    document = extrapolate([2.0, 1.5, 1.25]).to_dict()
    assert document["values"] == [2.0, 1.5, 1.25]
    assert document["extrapolated"] == pytest.approx(1.0)
    assert document["reliable"] is True


def test_extrapolate_settled_sequence():
    # Differences grow but the sequence moves by less than one percent overall
    values = [3.7267e-07, 3.7327e-07, 3.7542e-07]
    result = extrapolate(values)
    assert result.reliable
    assert result.value == values[-1]
    assert result.error == pytest.approx(2.75e-9)
    assert result.ratio == pytest.approx(2.15 / 0.6)
    assert result.order is None


def test_extrapolate_growing_sequence_beyond_settled_limit():
    result = extrapolate([1.0, 1.004, 1.012])
    assert not result.reliable
    assert result.value == 1.012
    assert result.error == pytest.approx(0.008)
