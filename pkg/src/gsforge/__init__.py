"""Emitter-based photonic graph-state circuit synthesis and LC-orbit tools."""

from gsforge.graphs import Graph, make_family
from gsforge.kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["Graph", "make_family", "BACKEND", "__version__"]
