"""Numerical toolkit for weakly holomorphic quadratic differentials on self-shrinkers."""

__version__ = "0.1.0"
