"""Logging, path validation and progress display."""
