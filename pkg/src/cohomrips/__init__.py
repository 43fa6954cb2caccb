"""Vietoris-Rips persistent cohomology in dimensions 0-2."""
__version__ = "0.1.0"
