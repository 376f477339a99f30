import os

from setuptools import setup

"""

setup.py

This script will be used to setup the surface_loss package for use in python environments.

Note:  To compile a distribution for the project run "python setup.py sdist" in the directory this file is located in.
To also build the wheel, run "python setup.py sdist bdist_wheel".

Note: numpy and scipy carry the field solver (sparse assembly and factorization) and the loss fit.  openpyxl is only
      needed for the xlsx export ("--export xlsx") and ConfigArgParse for the command line and JSON configuration.

"""

# Imports the __version__ since the package references don't yet exist in the scope of setup.py. It opens the file
# and interprets the code so the __version__ variable is populated, despite IDE warnings that it's undefined.
exec(open("surface_loss/_version.py").read())

# The text of the README file
README = open(os.path.join(os.path.dirname(__file__), "README.md")).read()

setup(
    name="surface_loss",
    version=os.environ.get("TAG_VERSION", __version__),  # noqa: F821
    description="Surface loss participation ratios of planar qubit designs and multi-channel loss fits",
    long_description=README,
    long_description_content_type="text/markdown",
    packages=[
        "surface_loss",
        "surface_loss.geometry",
        "surface_loss.solver",
        "surface_loss.participation",
        "surface_loss.lossfit",
        "surface_loss.measurements",
        "surface_loss.export",
    ],
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
    ],
    entry_points={
        "console_scripts": ["surface_loss=surface_loss.entrypoint:cli"],
    },
    python_requires=">=3.9",
    install_requires=["numpy", "scipy>=1.12", "openpyxl", "ConfigArgParse"],
    extras_require={"test": ["pytest"]},
    zip_safe=False,
)
