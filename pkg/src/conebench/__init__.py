"""Exact workbench for rational polyhedral fundamental domains of lattice group actions on cones."""

__version__ = "0.1.0"
