"""Exact Fenchel-Nielsen coordinates for rank-2 character varieties of punctured
spheres, and integer homology of their dual boundary complexes."""

__version__ = "0.1.0"
