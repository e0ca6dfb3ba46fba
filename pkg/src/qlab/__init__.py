"""qlab: dense classical simulation of quantum algorithm primitives."""

__version__ = "0.1.0"
