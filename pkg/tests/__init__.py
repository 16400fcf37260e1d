"""Tests for the TSKAN tool."""
