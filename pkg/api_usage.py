import logging

import surface_loss.constants as surface_loss_constants
import surface_loss.interface as surface_loss_interface

"""

api_usage.py

This script shows an example of the api usage:  sensitivities of the reference designs, a synthetic ensemble generated
from the quoted loss parameters and the fit that recovers them.

"""

# Setup logging
logging_level = logging.ERROR
logging_format = "%(levelname)s %(asctime)s [%(pathname)s] %(funcName)s at line %(lineno)d: %(message)s"
logging_date_format = "%d %b %Y %H:%M:%S"
logging.basicConfig(level=logging_level, format=logging_format, datefmt=logging_date_format)

# Setup console logging
console_logger = logging.StreamHandler()
console_logger.setLevel(logging_level)
console_logger.setFormatter(logging.Formatter(logging_format, logging_date_format))
logging.getLogger(surface_loss_constants.LOGGER_NAME).addHandler(console_logger)

"""

API Usage

The frequency below needs to be filled in with the qubit frequency of the devices:
frequency: The qubit frequency in hertz written for every synthetic device.

Note:  Solving the four reference designs over three mesh levels takes a while.  The resulting sensitivity vectors
       can be saved with the sensitivity csv exporter and read back with load_sensitivities.

"""

# Specify the device details
frequency = 5e9

# Compute the sensitivity vector of every reference design
sensitivities = [
    surface_loss_interface.compute_sensitivity(name) for name in surface_loss_constants.REFERENCE_DESIGN
]
for sensitivity in sensitivities:
    print(sensitivity.stringify())

# Check whether the designs can tell the interfaces apart
model = surface_loss_interface.create_model(["SV"])
print(surface_loss_interface.check_identifiability(sensitivities, model).stringify())

# Synthesize an ensemble of 35 devices with 20% scatter from the quoted loss parameters and fit it
ensemble = surface_loss_interface.synthesize_ensemble(
    sensitivities,
    {"SV": surface_loss_constants.QUOTED_SURFACE_LOSS_PRODUCT},
    surface_loss_constants.QUOTED_BACKGROUND_Q,
    0.2,
    frequency,
)
result = surface_loss_interface.fit_ensemble(ensemble, sensitivities, model, resamples=1000)
print(result.stringify())
print(result.bootstrap.stringify())

# Predict the quality factor and T1 of the first design under the fitted parameters
prediction = surface_loss_interface.predict_quality(result, sensitivities[0], frequency)
print(f"{sensitivities[0].design}: Q = {prediction.q:.4g}, T1 = {prediction.t1 * 1e6:.4g} us")
