from surface_loss.constants import QUOTED_BACKGROUND_Q, QUOTED_SURFACE_LOSS_PRODUCT

SUCCESS = 0
USAGE_ERROR = 1
DATA_ERROR = 2
NUMERICAL_ERROR = 3

TRUTH_X_SV = QUOTED_SURFACE_LOSS_PRODUCT
TRUTH_Q_BULK = QUOTED_BACKGROUND_Q
TRUTH_BULK = 1.0 / QUOTED_BACKGROUND_Q
QUBIT_FREQUENCY = 5e9

# Substrate-vacuum sensitivities in 1/m spanning surface shares of about 0.1 to 0.9 of the total loss
WIDE_SPREAD_R_SV = [2e3, 1e4, 5e4, 2e5]

# Substrate-vacuum sensitivities in 1/m spanning surface shares of about 0.2 to 0.5 of the total loss
NARROW_SPREAD_R_SV = [4e3, 8e3, 1.4e4, 2.1e4]

DESIGN_NAMES = ["Hero", "ExtendedHero", "Guard", "Skeleton"]

WIDE_HEADER = "qubit_id,wafer,substrate,process,design,freq_GHz,t1_us_mean,t1_us_std,n_samples"
LONG_HEADER = "qubit_id,wafer,substrate,process,design,freq_GHz,timestamp_iso8601,t1_us"
