"""Transfer-function toolkit for decomposing distributed optimization algorithms."""

__version__ = "0.1.0"
