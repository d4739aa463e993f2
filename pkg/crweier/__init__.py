"""Numerical verification of pseudohermitian geometry on 3-dimensional CR manifolds."""

__version__ = "0.1.0"
