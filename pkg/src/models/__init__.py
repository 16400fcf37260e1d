"""Domain models for TSKAN."""
