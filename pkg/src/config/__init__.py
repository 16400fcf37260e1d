"""Run configuration, paths and numeric defaults."""
