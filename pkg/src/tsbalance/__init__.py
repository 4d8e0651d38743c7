"""Exact travelling-salesman-type distance functionals and balance checks on small graphs."""

__version__ = "0.1.0"
