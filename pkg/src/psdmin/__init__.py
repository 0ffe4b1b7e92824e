"""Exact tools for psd-minimal polytopes."""

__version__ = "0.1.0"
