"""
This package will fit measured quality factors to the multi-channel loss model, estimate uncertainties, diagnose
identifiability and select informative design subsets.
"""
