"""Verification kernel for level-2 modular Schwarzian equations."""

__version__ = "0.1.0"
