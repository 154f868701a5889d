"""Utility helpers shared by the configuration and command-line layers."""
