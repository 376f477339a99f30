from logging import getLogger
from warnings import warn

from surface_loss.constants import DEFAULT_LEVELS, INTERFACE_ORDER, LOGGER_NAME
from surface_loss.geometry.design import default_layers, load_geometry, reference_design
from surface_loss.lossfit.bootstrap import bootstrap
from surface_loss.lossfit.fit import fit
from surface_loss.lossfit.identifiability import identifiability, select_designs
from surface_loss.lossfit.model import LossModel, LossParameters, Observation, angular_frequency, predict
from surface_loss.measurements.loader import load_csv
from surface_loss.measurements.synthesis import synthesize
from surface_loss.participation.sensitivity import design_sensitivity, load_sensitivity_csv

"""

interface.py

This script acts as a simplified interface for common operations of the surface loss library.

This script holds the following function(s):
compute_sensitivity(design_or_name, thickness=None, eps_layer=None, levels=DEFAULT_LEVELS, scale=1.0)
load_design(file_path)
load_measurements(file_path)
load_sensitivities(file_path)
create_model(channels=("SV",), include_bulk=True, merge_channels=False)
create_parameters(model, values)
create_observations(ensemble, sensitivities, use_median=False)
fit_ensemble(ensemble, sensitivities, model, resamples=0, seed=0, wafer_weighting=False)
synthesize_ensemble(sensitivities, x, q_bulk, sigma, frequency, devices=35, seed=0)
choose_designs(sensitivities, k)
check_identifiability(sensitivities, model)
predict_quality(fit_or_parameters, sensitivity, frequency)

"""


def compute_sensitivity(design_or_name, thickness=None, eps_layer=None, levels=DEFAULT_LEVELS, scale=1.0):
    design = design_or_name
    if isinstance(design_or_name, str):
        design = reference_design(design_or_name, scale)
    keywords = {}
    if thickness is not None:
        keywords["thickness"] = thickness
    if eps_layer is not None:
        keywords["eps_layer"] = eps_layer
    return design_sensitivity(design, default_layers(**keywords), levels).vector


def load_design(file_path):
    return load_geometry(file_path)


def load_measurements(file_path):
    return load_csv(file_path)


def load_sensitivities(file_path):
    return load_sensitivity_csv(file_path)


def create_model(channels=("SV",), include_bulk=True, merge_channels=False):
    return LossModel(channels, include_bulk, merge_channels)


def create_parameters(model, values):
    return LossParameters(model, values)


def create_observations(ensemble, sensitivities, use_median=False):
    by_design = {sensitivity.design: sensitivity for sensitivity in sensitivities}
    unmatched = [design for design in ensemble.designs if design not in by_design]
    if unmatched:
        log_message = f"Measured design(s) without sensitivities are skipped: {', '.join(unmatched)}."
        getLogger(LOGGER_NAME).warning(log_message)
        warn(log_message, RuntimeWarning)
    return [
        Observation(
            by_design[measurement.design],
            measurement.quality_factor(use_median),
            None,
            measurement.qubit_id,
            measurement.wafer,
            measurement.substrate,
            measurement.process,
        )
        for measurement in ensemble
        if measurement.design in by_design
    ]


def fit_ensemble(ensemble, sensitivities, model, resamples=0, seed=0, wafer_weighting=False):
    observations = create_observations(ensemble, sensitivities)
    result = fit(observations, model, wafer_weighting)
    if resamples:
        result.bootstrap = bootstrap(observations, model, resamples, seed=seed, wafer_weighting=wafer_weighting)
    return result


def synthesize_ensemble(sensitivities, x, q_bulk, sigma, frequency, devices=35, seed=0):
    """
    x maps interface names to loss products in meters; a q_bulk of None means no bulk loss.
    """
    model = LossModel(INTERFACE_ORDER, include_bulk=True)
    values = dict(x)
    values["bulk"] = 0.0 if q_bulk is None else 1.0 / q_bulk
    return synthesize(sensitivities, LossParameters(model, values), sigma, frequency, devices, seed=seed)


def choose_designs(sensitivities, k):
    return select_designs(sensitivities, k)


def check_identifiability(sensitivities, model):
    return identifiability(sensitivities, model)


def predict_quality(fit_or_parameters, sensitivity, frequency):
    return predict(fit_or_parameters, sensitivity, angular_frequency(frequency))
