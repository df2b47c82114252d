"""Exact computer algebra for the study of exotic affine spaces.

Subpackages operate on sparse rational polynomials, weighted dual graphs,
finitely presented groups and finite simplicial complexes; every computation
is exact (arbitrary-precision rationals or integers, no floating point).
"""

__version__ = "0.1.0"
