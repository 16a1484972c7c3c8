"""Exact tools for K4-free graphs with small independence number.

Geometric constructions on spheres, layer densification, clique and
independent-set certifiers, dependent random choice, and closed-form bounds.
"""

__version__ = "0.1.0"
