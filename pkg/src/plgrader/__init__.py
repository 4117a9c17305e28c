"""Automated assessment and feedback for Prolog exercises."""

__version__ = "0.1.0"
