__all__ = ["__version__", "__author__"]
__version__ = "0.4.0"
__author__ = "Kevin Martinez"
