from logging import getLogger
from math import log2

from surface_loss.constants import LOGGER_NAME, MINIMUM_EXTRAPOLATION_LEVELS
from surface_loss.exception import ExtrapolationError

"""

extrapolation.py

This script holds the mesh convergence extrapolation used on energies and surface integrals computed at successive
refinement levels.  The last three values of a sequence are fitted to value + c * h^p with h halving per level, which
is Aitken's delta squared process on the differences.

A monotone sequence whose differences do not shrink cannot be extrapolated.  When its total change over the three
levels is still below one percent of the finest value it counts as settled:  the finest value is reported with the
total change as its error.  Any other such sequence, and every non-monotone one, is unreliable.

This script holds the following object(s):
Extrapolation(object)

This script holds the following function(s):
extrapolate(values)

"""

# Differences below this fraction of the finest value are treated as round-off
ROUND_OFF_RELATIVE = 1e-12

# Largest total change, relative to the finest value, of a settled sequence
SETTLED_RELATIVE = 1e-2


class Extrapolation:
    def __init__(self, value, error, values, ratio=None, order=None, reliable=True):
        self.value = value
        self.error = error
        self.values = list(values)
        self.ratio = ratio
        self.order = order
        self.reliable = reliable

    def __repr__(self):
        return self.__str__()

    def __str__(self):
        return self.stringify().replace("\t", "").replace("\n", " ")

    @property
    def finest(self):
        return self.values[-1]

    def to_dict(self):
        return {
            "values": self.values,
            "extrapolated": self.value,
            "error": self.error,
            "ratio": self.ratio,
            "observed_order": self.order,
            "reliable": self.reliable,
        }

    def stringify(self, padding=""):
        string = (
            padding + "Extrapolated: {}\n"
            + padding + "Error: {}\n"
            + padding + "Ratio: {}\n"
            + padding + "Observed Order: {}\n"
            + padding + "Reliable: {}"
        )
        return string.format(self.value, self.error, self.ratio, self.order, self.reliable)


def extrapolate(values):
    values = [float(value) for value in values]
    if len(values) < MINIMUM_EXTRAPOLATION_LEVELS:
        log_message = (
            f"Extrapolation needs at least {MINIMUM_EXTRAPOLATION_LEVELS} successive levels but {len(values)} were given."
        )
        getLogger(LOGGER_NAME).error(log_message)
        raise ExtrapolationError(log_message)

    coarse, middle, fine = values[-3:]
    first_difference = middle - coarse
    second_difference = fine - middle
    round_off = ROUND_OFF_RELATIVE * max(abs(fine), abs(middle), abs(coarse))

    if abs(first_difference) <= round_off and abs(second_difference) <= round_off:
        return Extrapolation(fine, abs(second_difference), values, reliable=True)

    if abs(first_difference) <= round_off or first_difference * second_difference < 0:
        getLogger(LOGGER_NAME).debug(f"Non-monotone refinement sequence: {values}.")
        return Extrapolation(fine, abs(second_difference), values, reliable=False)

    ratio = second_difference / first_difference
    if ratio >= 1.0:
        change = abs(first_difference) + abs(second_difference)
        if change <= SETTLED_RELATIVE * abs(fine):
            getLogger(LOGGER_NAME).debug(f"Settled refinement sequence: {values} with ratio {ratio}.")
            return Extrapolation(fine, change, values, ratio=ratio, reliable=True)
        getLogger(LOGGER_NAME).debug(f"Non-converging refinement sequence: {values} with ratio {ratio}.")
        return Extrapolation(fine, abs(second_difference), values, ratio=ratio, reliable=False)

    value = fine + second_difference * ratio / (1.0 - ratio)
    order = -log2(ratio) if ratio > 0 else None
    return Extrapolation(value, abs(value - fine), values, ratio, order, True)
