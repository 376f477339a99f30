"""
This package will describe device geometries as weighted collections of 2D cross-sections with conductors on a
dielectric substrate, along with the assumed lossy layers.
"""
