"""
_version.py

This script identifies the version of the surface_loss library.
"""

__version__ = "0.1.0"
