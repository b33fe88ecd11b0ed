"""Differentially private continual release of graph statistics on fully dynamic streams."""

__version__ = "0.1.0"
