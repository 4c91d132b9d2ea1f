"""Exact verification toolkit for binomial bent functions and their Kloosterman criterion."""

__version__ = "0.1.0"
