"""Exact spectral symmetry analysis for tensors and uniform hypergraphs."""

__version__ = "0.1.0"
