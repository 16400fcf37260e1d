"""
Environment validation for TSKAN runs.

Key modules:
- environment: .env loading and seed precedence (flag > config > TSKAN_SEED > 0)
"""
