"""Symbolic-numeric engine for the Tulczyjew triple of mechanics and first-order field theory."""

__version__ = "0.1.0"
