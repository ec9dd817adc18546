"""
GroDiv - Source Package
Computational laboratory for divergence functions of finitely generated groups.
"""

__version__ = "0.1.0"
