"""Limits of early-exercise boundaries at expiry, with a PSOR cross-check."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
