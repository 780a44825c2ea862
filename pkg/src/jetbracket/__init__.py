"""Compatibility of overdetermined PDE systems via multi-brackets."""

__version__ = "0.1.0"
