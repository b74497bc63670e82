"""Bungee / filled-Julia / escaping set classification for function semigroups."""

__version__ = "0.1.0"
