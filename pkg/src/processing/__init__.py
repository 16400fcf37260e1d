"""Data loading, feature extraction, training and selection."""
