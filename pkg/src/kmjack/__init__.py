"""Jackknife bias correction for Kaplan-Meier integrals with tail imputation."""

__version__ = "0.1.0"
