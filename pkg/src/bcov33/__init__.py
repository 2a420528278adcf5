"""Exact verification pipeline for the genus-one BCOV identity on the (3,3) family."""

__version__ = "0.1.0"
