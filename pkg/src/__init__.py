"""
TSKAN: frequency-domain Kolmogorov-Arnold network for QoE prediction.

This package provides functionality for:
- Loading multivariate streaming-session time series with MOS labels
- Turning sessions into DFT magnitude and phase features
- Training one-layer spline KAN regressors with top-k feature selection
- Fitting OLS and LASSO baselines on the same features
- Exporting activation curves and importance summaries as CSV and SVG
"""
