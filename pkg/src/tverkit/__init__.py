"""Desk-scale computations around barycenters of polytope skeleta and
Tverberg-type partitions: exact certificates, constraint lifts, deleted
products and bounds for the topological Tverberg number."""

__version__ = "0.1.0"
