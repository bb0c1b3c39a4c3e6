"""Numerical experiments for the large sieve with square moduli."""

__version__ = "0.1.0"
