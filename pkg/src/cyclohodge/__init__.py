"""Exact cyclotomic, character-sum and Galois-module computations for the
Hodge-group centers of superelliptic Jacobians y^q = f(x)."""

__version__ = "0.1.0"
