"""Exact perfect forms, Voronoi complexes, torsion bounds and cyclotomic checks."""

__version__ = "0.1.0"
