"""Exact verification toolkit for a one-parameter family of 10-facet mirror
polytopes, their Coxeter groups and the glued 4-complex built from them."""

__version__ = "0.1.0"
