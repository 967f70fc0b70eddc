"""Timed automata simulation distances via quantitative games."""

__version__ = "0.1.0"
