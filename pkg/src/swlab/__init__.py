"""Exact twisted Schur-Weyl computations for involutive Yang-Baxter operators."""

__version__ = "0.1.0"
