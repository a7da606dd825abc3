"""Genus-2 bordered Floer bimodules, Hochschild homology and fixed point Floer ranks."""
__version__ = "0.1.0"
