"""Exact lattice, period-domain and twistor-line computations for hyperkähler
manifolds, with independently checkable certificates."""

__version__ = "0.1.0"
