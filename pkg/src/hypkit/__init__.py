"""Hyperbolic trigonometry, isometry construction and tree tilings."""

__version__ = "0.1.0"
