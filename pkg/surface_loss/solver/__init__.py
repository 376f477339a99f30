"""
This package will mesh cross-sections and solve the 2D electrostatic boundary value problem for the potential, charges,
energies and surface fields, including mesh convergence extrapolation.
"""
