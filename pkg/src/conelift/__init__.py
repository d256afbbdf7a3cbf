"""Cone lifts, face lattices, and lower bounds on lift sizes."""
from . import config
from .config import Config
from .errors import ConeliftError

__version__ = "0.1.0"

__all__ = ["Config", "ConeliftError", "config", "__version__"]
