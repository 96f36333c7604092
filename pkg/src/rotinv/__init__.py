"""Rotation-invariant image descriptors and a galaxy-morphology evaluation harness."""

__version__ = "0.1.0"
