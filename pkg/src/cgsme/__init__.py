"""Coarse-grained vs rotating-wave Markovian master equations for a V-type
three-level atom in an Ohmic zero-temperature bath."""

__version__ = "0.1.0"
