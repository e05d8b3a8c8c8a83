"""First-order Melnikov analysis for the X29 and X210 Lotka-Volterra families."""

__version__ = "0.1.0"
