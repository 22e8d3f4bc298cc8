"""Equivariant cohomology rings as coordinate rings of zero schemes of vector fields."""

__version__ = "0.1.0"
