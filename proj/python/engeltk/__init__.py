"""Horizontal and transverse curves in the 4-dimensional Engel coordinate
models: invariants, Geiges projection and lifting, front calculus with
Reidemeister-I area adjustment, rigidity searches, and the loop homotopy
engine. Thin wrapper over the _engeltk extension module."""

try:
    from engeltk._engeltk import *  # noqa: F401,F403  (installed layout)
except ImportError:
    from _engeltk import *  # noqa: F401,F403  (build-tree layout)

__version__ = "0.1.0"
