"""Polychromatic colorings of hypercube subcubes: constructions, verification, bounds and search."""

__version__ = "0.1.0"
