"""Weierstrass points among the fixed points of Atkin-Lehner involutions on X_0(N)."""

__version__ = "0.1.0"
