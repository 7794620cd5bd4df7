"""DISCO: density-based internal cluster validity with explicit noise evaluation"""

__version__ = "0.1.0"
