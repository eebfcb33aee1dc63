"""Introversion scoring from scientometric profiles."""

from introscore._core import *  # noqa: F401,F403
from introscore._core import __version__  # noqa: F401
