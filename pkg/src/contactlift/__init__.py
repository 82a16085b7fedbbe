"""Certified verification of contact lifts over symplectic domains.

Symbolic holomorphic expressions, differential forms with adaptive path
integration, model domains with extremal discs, trivialized contact lifts,
period obstructions, and sub-Finsler metric bounds, plus a scenario CLI.
"""

__version__ = "0.1.0"

from .errors import ContactLiftError

__all__ = ["ContactLiftError", "__version__"]
