"""Exact para-Grassmann q-oscillator toolkit over biorthonormal frames."""

from paraosc.qscalar import DeformParams, ExactRing, FloatRing, QScalar, make_ring

__version__ = "0.1.0"

__all__ = ["DeformParams", "ExactRing", "FloatRing", "QScalar", "make_ring", "__version__"]
