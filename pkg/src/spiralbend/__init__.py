"""Bending maps, annulus-glued embeddings, planar covering certificates and a cap-cut norm."""

__version__ = "0.1.0"
