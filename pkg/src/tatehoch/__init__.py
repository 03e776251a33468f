"""Hochschild and Tate-Hochschild (co)homology of Frobenius algebras over Q and F_p."""
__version__ = "0.1.0"
