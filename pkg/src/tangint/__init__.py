"""Tangential intersections of curves in powers of the Legendre elliptic
scheme: period lattices, elliptic logarithms, Betti coordinates, relation
lattices, and an exact division-polynomial oracle for cross-validation."""

__version__ = "0.1.0"
