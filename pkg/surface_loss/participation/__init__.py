"""
This package will compute thin-layer participation ratios and surface loss sensitivities from field solutions and
combine cross-sections into per-design sensitivity vectors.  Closed-form reference values live here as well.
"""
