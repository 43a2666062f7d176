"""varsmooth - variable smoothing for weakly convex composite problems on the Stiefel manifold."""

__version__ = "1.0.0"
__author__ = "varsmooth developers"
