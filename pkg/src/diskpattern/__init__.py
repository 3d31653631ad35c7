"""Combinatorial disk patterns, Coxeter graph realizability and vertex extremal width."""

__version__ = "0.1.0"
