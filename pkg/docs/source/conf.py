# Sphinx configuration for the surface_loss documentation.
import os
import sys

# The package is documented from the repository checkout
sys.path.insert(0, os.path.abspath("../.."))

exec(open(os.path.join(os.path.dirname(__file__), "../../surface_loss/_version.py")).read())

project = "surface_loss"
copyright = "2026, surface_loss contributors"
author = "surface_loss contributors"
release = __version__  # noqa: F821

master_doc = "index"

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
]

autodoc_mock_imports = ["openpyxl"]

exclude_patterns = []

html_theme = "sphinx_rtd_theme"
