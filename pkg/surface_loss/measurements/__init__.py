"""
This package will read, aggregate, synthesize and describe per-device T1 measurements.
"""
