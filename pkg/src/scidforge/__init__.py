"""Bounds, certificates and small-case search for sets of k-spaces in PG(n, q)
pairwise meeting in a point."""

__version__ = "0.1.0"
