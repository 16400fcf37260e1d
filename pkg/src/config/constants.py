"""Numerical constants and defaults for TSKAN."""

# Dataset
DEFAULT_VARIABLES = ("stalling", "bitrate", "chunksize", "qp", "framerate", "videowidth")
DEFAULT_LABEL_RANGE = (-2.5, 2.5)
DEFAULT_MAX_LENGTH = 16

# Split fractions
DEFAULT_SPLIT = (0.70, 0.15, 0.15)
SPLIT_SUM_TOLERANCE = 1e-9

# Robust scaler
SCALE_FLOOR = 1e-12       # IQR below this is replaced by 1.0
QUANTILE_LOW = 25.0
QUANTILE_HIGH = 75.0

# Spectral features
DEFAULT_F = 1
ZERO_MAGNITUDE_TOL = 1e-12   # relative to the largest coefficient of the spectrum
DC_IMAG_TOL = 1e-9

# Spline activations (8 intervals x cubic -> 11 coefficients + 1 base weight)
DEFAULT_GRID_SIZE = 8
DEFAULT_DEGREE = 3
DEFAULT_GRID_QUANTILES = (0.01, 0.99)
GRID_MARGIN = 0.10
INIT_COEF_SCALE = 1e-2
INIT_BASE_WEIGHT = 1.0

# Training
DEFAULT_EPOCHS = 2000
DEFAULT_LEARNING_RATE = 1e-2
DEFAULT_PATIENCE = 200
DEFAULT_SMOOTHNESS = 1e-3
DEFAULT_SPARSITY = 1e-2
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8
LOG_EVERY = 100

# Selection
DEFAULT_K = 10
STAGE2_INIT_MODES = ("fresh", "prune")

# Baselines
OLS_RIDGE_JITTER = 1e-10
DEFAULT_LASSO_LAMBDA = 0.1
DEFAULT_LASSO_TOL = 1e-8
DEFAULT_LASSO_MAX_ITER = 10000
BASELINE_FEATURE_MODES = ("frequency", "dc-only")

# Explanation export
DEFAULT_CURVE_POINTS = 100
RANGE_POLICIES = ("data", "grid")
MIN_OPACITY = 0.15
CSV_FLOAT_FORMAT = "%.9g"
SVG_WIDTH = 640
SVG_HEIGHT = 480
DEFAULT_PHASES = (-1.5707963267948966, 0.0, 1.5707963267948966, 3.141592653589793)

# Exit codes
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_TRAINING = 4
EXIT_IO = 5
EXIT_INTERRUPTED = 130
