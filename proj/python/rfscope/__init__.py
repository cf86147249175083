"""Receptive-field, grid-effect, and detection-metric analyses.

Thin re-export of the compiled extension; see the individual docstrings on
the extension members for details.
"""

from ._rfscope import *  # noqa: F401,F403
from ._rfscope import __doc__  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
