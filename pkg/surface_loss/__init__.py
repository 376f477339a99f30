import logging
import warnings

from surface_loss._version import __version__
from surface_loss.constants import LOGGER_NAME

"""

__init__.py

This package will have scripts for computing surface loss sensitivities of planar qubit designs and for fitting measured
quality factors to multi-channel loss models, with access to the underlying functions through an interface.

This init script will initialize the logger for this library with a NullHandler to prevent unexpected output
from applications that may not be implementing logging.  It will also ignore warnings reported by the python
warning by default.  (Warnings are also thrown to the logger when they occur in addition to the warnings
framework.)

Note:  This library uses warnings for conditions that do not stop a computation, such as absent interfaces, single
       T1 samples or too few mesh levels for extrapolation.  To turn off warnings use the "-W ignore" option.  See the
       Python documentation for further options.

"""


# Import interface as api
from surface_loss.interface import *


def null_logger():
    from logging import NullHandler

    # Get the logger from the LOGGER_NAME constant and add the NullHandler to it
    logging.getLogger(LOGGER_NAME).addHandler(NullHandler())

    logging.getLogger(LOGGER_NAME).propagate = False

    # Ignore warnings by default
    warnings.filterwarnings("ignore")


null_logger()
