"""Vertex (edge-coloring) models, fragment gluing and connection-matrix rank
experiments, in exact Gaussian-rational arithmetic."""

from vertexlab.exactalg import ExactMatrix, GaussianRational, gq, rank

__version__ = "0.1.0"

__all__ = ["ExactMatrix", "GaussianRational", "gq", "rank", "__version__"]
