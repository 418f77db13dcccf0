"""Exact verification toolkit for a deformed Fermat surface and torsors under abelian varieties."""

__version__ = "0.1.0"
