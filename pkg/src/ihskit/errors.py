"""Exception hierarchy shared across the package.

The command line interface maps ``IhskitError`` to exit code 1 (a domain
precondition failed) and ``InputError`` to exit code 2 (a document or argument
could not be parsed).
"""

from __future__ import annotations


class IhskitError(Exception):
    """A domain precondition was violated."""


class InputError(Exception):
    """An input document or argument is malformed."""


class LatticeError(IhskitError):
    """Invalid lattice data or lattice operation."""


class IsometryError(IhskitError):
    """Invalid isometry data or isometry operation."""


class ChamberError(IhskitError):
    """Invalid wall-set or chamber operation."""


class TorsionError(IhskitError):
    """Invalid spectral or torsion data."""
