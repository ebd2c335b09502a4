"""Classification of surfaces with p_g = q = 1 isogenous to a product of curves."""

__version__ = "0.1.0"
