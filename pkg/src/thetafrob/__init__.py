"""Theta decompositions of Jacobi theta powers and k-colored Frobenius partitions."""

__version__ = "0.1.0"
