"""Kovacic algorithm and Bianchi IX variational-equation toolkit."""

__version__ = "0.1.0"
