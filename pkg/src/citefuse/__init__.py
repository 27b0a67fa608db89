"""Fuse Web of Science and Scopus records and run co-citation analyses over them."""

__version__ = "0.1.0"
