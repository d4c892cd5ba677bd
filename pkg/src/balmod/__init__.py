"""Exact q-series toolkit for the permuted weight-one generators of the
graded rings M(Gamma_1(p)), 5 <= p <= 19, with identity verification."""

__version__ = "0.1.0"
