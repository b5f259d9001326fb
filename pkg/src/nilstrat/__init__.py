"""Exact coadjoint-orbit invariants of nilpotent Lie algebras and stepwise decompositions."""

__version__ = "0.1.0"
