"""Combinatorial equivariant Floer-type invariants over GF(2)."""

__version__ = "0.1.0"
