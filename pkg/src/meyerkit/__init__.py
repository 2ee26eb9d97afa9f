"""Exact cut-and-project model sets, covering certificates and Brooks quasi-morphisms."""

__version__ = "0.1.0"
