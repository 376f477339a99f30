from itertools import combinations
from logging import getLogger
from math import inf, isfinite

import numpy as np

from surface_loss.constants import (
    BULK_PARAMETER,
    EXHAUSTIVE_SELECTION_LIMIT,
    ILL_CONDITIONED_LIMIT,
    INTERFACE_ORDER,
    LOGGER_NAME,
    UNRESOLVABLE_CORRELATION,
)
from surface_loss.exception import DesignSelectionError, IdentifiabilityError

"""

identifiability.py

This script holds the diagnostics that tell whether a set of designs can separate the loss channels and the D-optimal
selection of a design subset.

Channel pairs are compared with the Pearson correlation of their sensitivity columns when the model carries a bulk
term, since a common offset is absorbed by the bulk parameter, and with the cosine similarity otherwise.  Each channel
is also compared against the bulk column itself.  Pairs whose correlation magnitude exceeds 0.98 cannot be resolved by
the data, unless one of the channels has zero sensitivity in every design.

This script holds the following object(s):
IdentifiabilityReport(object)
SelectionResult(object)

This script holds the following function(s):
condition_number(matrix)
identifiability(sensitivities, model, weights=None)
select_designs(candidates, k)

"""

# Relative margin a later subset needs to replace the best one found so far
SELECTION_TIE_MARGIN = 1e-12


class IdentifiabilityReport:
    def __init__(
        self, correlations, bulk_correlations, condition_number, designs, correlation_kind, absent_channels=()
    ):
        # "SM/SV" -> correlation of the two sensitivity columns
        self.correlations = correlations

        # Channel -> cosine similarity with the bulk column, empty without a bulk term
        self.bulk_correlations = bulk_correlations

        self.condition_number = condition_number
        self.designs = list(designs)
        self.correlation_kind = correlation_kind

        # Channels with zero sensitivity in every design take part in no unresolvable pair
        self.absent_channels = list(absent_channels)

    def __repr__(self):
        return self.__str__()

    def __str__(self):
        return self.stringify().replace("\t", "").replace("\n", " ")

    @property
    def unresolvable_pairs(self):
        pairs = [
            tuple(pair.split("/"))
            for pair, value in self.correlations.items()
            if abs(value) > UNRESOLVABLE_CORRELATION
            and not any(channel in self.absent_channels for channel in pair.split("/"))
        ]
        pairs.extend(
            (channel, BULK_PARAMETER)
            for channel, value in self.bulk_correlations.items()
            if abs(value) > UNRESOLVABLE_CORRELATION
        )
        return pairs

    @property
    def ill_conditioned(self):
        return not self.condition_number < ILL_CONDITIONED_LIMIT

    @property
    def flagged(self):
        return bool(self.unresolvable_pairs) or self.ill_conditioned

    def to_dict(self):
        return {
            "correlation_kind": self.correlation_kind,
            "correlations": dict(self.correlations),
            "bulk_correlations": dict(self.bulk_correlations),
            "condition_number": self.condition_number,
            "ill_conditioned": self.ill_conditioned,
            "unresolvable_pairs": [list(pair) for pair in self.unresolvable_pairs],
            "absent_channels": self.absent_channels,
            "designs": self.designs,
        }

    def stringify(self, padding=""):
        string = padding + "Correlation Kind: {}\n" + padding + "Condition Number: {}\n" + padding + "Ill Conditioned: {}"
        string = string.format(self.correlation_kind, self.condition_number, self.ill_conditioned)
        for pair, value in self.correlations.items():
            string += "\n" + padding + "Correlation {}: {}".format(pair, value)
        for channel, value in self.bulk_correlations.items():
            string += "\n" + padding + "Correlation {}/{}: {}".format(channel, BULK_PARAMETER, value)
        for pair in self.unresolvable_pairs:
            string += "\n" + padding + "Unresolvable: {} and {}".format(*pair)
        return string


def _correlation(first, second, centered):
    if centered:
        first = first - first.mean()
        second = second - second.mean()
    first_norm, second_norm = np.linalg.norm(first), np.linalg.norm(second)
    scale = max(np.max(np.abs(first)), np.max(np.abs(second)), 0.0) * np.sqrt(first.size)
    if first_norm <= 1e-12 * scale or second_norm <= 1e-12 * scale or scale == 0.0:
        # No variation to tell the columns apart
        return 1.0
    return float(np.clip(np.dot(first, second) / (first_norm * second_norm), -1.0, 1.0))


def condition_number(matrix):
    """
    Returns the 2-norm condition number of the column equilibrated matrix, infinite when it is rank deficient.
    """
    matrix = np.asarray(matrix, dtype=float)
    norms = np.linalg.norm(matrix, axis=0)
    if matrix.size == 0 or np.any(norms == 0.0):
        return inf
    singular_values = np.linalg.svd(matrix / norms, compute_uv=False)
    if singular_values[-1] <= np.finfo(float).eps * singular_values[0]:
        return inf
    value = float(singular_values[0] / singular_values[-1])
    return value if isfinite(value) else inf


def _identifiability(sensitivities, model, weights=None):
    weights = np.ones(len(sensitivities)) if weights is None else np.asarray(weights, dtype=float)
    columns = np.array([sensitivity.values(INTERFACE_ORDER) for sensitivity in sensitivities], dtype=float)

    correlations = {}
    for first, second in combinations(range(len(INTERFACE_ORDER)), 2):
        pair = f"{INTERFACE_ORDER[first]}/{INTERFACE_ORDER[second]}"
        correlations[pair] = _correlation(columns[:, first], columns[:, second], model.include_bulk)

    bulk_correlations = {}
    if model.include_bulk:
        ones = np.ones(len(sensitivities))
        design = model.design_matrix(sensitivities)
        for index, parameter in enumerate(model.channel_parameters):
            bulk_correlations[parameter] = _correlation(design[:, index], ones, False)

    weighted = model.design_matrix(sensitivities) * np.sqrt(weights)[:, None]
    report = IdentifiabilityReport(
        correlations,
        bulk_correlations,
        condition_number(weighted),
        [sensitivity.design for sensitivity in sensitivities],
        "pearson" if model.include_bulk else "cosine",
        [channel for index, channel in enumerate(INTERFACE_ORDER) if not np.any(columns[:, index])],
    )

    logger = getLogger(LOGGER_NAME)
    for pair in report.unresolvable_pairs:
        logger.info(f"Loss channels: {pair[0]} and {pair[1]} cannot be resolved by the given designs.")
    if report.ill_conditioned:
        logger.info(f"Weighted design matrix is ill conditioned with condition number: {report.condition_number}.")

    return report


def identifiability(sensitivities, model, weights=None):
    designs = {sensitivity.design for sensitivity in sensitivities}
    if len(designs) < 2:
        log_message = f"Identifiability needs at least 2 designs but {len(designs)} were given."
        getLogger(LOGGER_NAME).error(log_message)
        raise IdentifiabilityError(log_message)
    return _identifiability(sensitivities, model, weights)


class SelectionResult:
    def __init__(self, designs, criterion, condition_number, exhaustive):
        self.designs = list(designs)
        self.criterion = criterion
        self.condition_number = condition_number
        self.exhaustive = exhaustive

    def __repr__(self):
        return self.__str__()

    def __str__(self):
        return self.stringify().replace("\t", "").replace("\n", " ")

    def stringify(self, padding=""):
        string = (
            padding + "Designs: {}\n"
            + padding + "Criterion: {}\n"
            + padding + "Condition Number: {}\n"
            + padding + "Exhaustive: {}"
        )
        return string.format(", ".join(self.designs), self.criterion, self.condition_number, self.exhaustive)


def _selection_matrix(candidates):
    columns = np.array([candidate.values(INTERFACE_ORDER) for candidate in candidates], dtype=float)
    columns = columns[:, np.any(columns != 0.0, axis=0)]
    if columns.size:
        columns = columns / np.sqrt(np.mean(columns**2, axis=0))
    return np.hstack([columns, np.ones((len(candidates), 1))])


def _criterion(rows):
    # det(A^T A) when the subset can determine every column, det(A A^T) while it is still too small
    gram = rows.T @ rows if rows.shape[0] >= rows.shape[1] else rows @ rows.T
    value = float(np.linalg.det(gram))

    # Determinants below round-off of the Hadamard bound count as singular
    if value <= SELECTION_TIE_MARGIN * float(np.prod(np.diag(gram))):
        return 0.0
    return value


def _better(value, best):
    return value > best * (1.0 + SELECTION_TIE_MARGIN)


def _exhaustive(matrix, k):
    best, best_subset = None, None
    for subset in combinations(range(matrix.shape[0]), k):
        value = _criterion(matrix[list(subset)])
        if best is None or _better(value, best):
            best, best_subset = value, subset
    return list(best_subset), best


def _greedy_exchange(matrix, k):
    selected = []
    for _ in range(k):
        best, best_index = None, None
        for index in range(matrix.shape[0]):
            if index in selected:
                continue
            value = _criterion(matrix[selected + [index]])
            if best is None or _better(value, best):
                best, best_index = value, index
        selected.append(best_index)

    best = _criterion(matrix[selected])
    improved = True
    while improved:
        improved = False
        for position in range(k):
            for index in range(matrix.shape[0]):
                if index in selected:
                    continue
                trial = selected[:position] + [index] + selected[position + 1 :]
                value = _criterion(matrix[trial])
                if _better(value, best):
                    selected, best, improved = trial, value, True
    return sorted(selected), best


def select_designs(candidates, k):
    """
    Selects the k designs whose sensitivity matrix, augmented with the bulk column, has the largest information
    determinant.  Columns are normalized to unit root mean square so that the channels count equally, and ties go to
    the lexicographically first design names.
    """
    if not candidates:
        log_message = "No candidate designs were given for selection."
        getLogger(LOGGER_NAME).error(log_message)
        raise DesignSelectionError(log_message)
    if not 1 <= k <= len(candidates):
        log_message = f"Cannot select {k} design(s) from {len(candidates)} candidate(s)."
        getLogger(LOGGER_NAME).error(log_message)
        raise DesignSelectionError(log_message)

    candidates = sorted(candidates, key=lambda candidate: candidate.design)
    matrix = _selection_matrix(candidates)

    exhaustive = len(candidates) <= EXHAUSTIVE_SELECTION_LIMIT
    if exhaustive:
        selected, criterion = _exhaustive(matrix, k)
    else:
        getLogger(LOGGER_NAME).info(
            f"Using greedy exchange selection for {len(candidates)} candidates above the exhaustive limit of "
            f"{EXHAUSTIVE_SELECTION_LIMIT}."
        )
        selected, criterion = _greedy_exchange(matrix, k)

    if criterion <= 0.0:
        getLogger(LOGGER_NAME).warning(f"Selected designs are degenerate with information determinant: {criterion}.")

    return SelectionResult(
        [candidates[index].design for index in selected],
        criterion,
        condition_number(matrix[selected]),
        exhaustive,
    )
