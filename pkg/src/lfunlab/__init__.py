"""Desk-scale laboratory for Dirichlet L-functions over subgroups of characters modulo a prime."""

__version__ = "0.1.0"
