"""Köthe co-echelon algebras: weight families, conditions and classification."""

__version__ = "0.1.0"
