"""Exact computation with Hopf-cyclic cocyclic modules and their cup products."""

__version__ = "0.1.0"
