"""Lifting properties between maps of finite topological spaces."""

__version__ = "0.1.0"
