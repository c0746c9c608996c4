"""Exact computations on tree spaces, their duals and the slice constructions built on them."""

__version__ = "0.1.0"
