"""
GroDiv - CLI Package
"""

from .context import CliState, RunConfig
from .main import cli, main

__all__ = ["CliState", "RunConfig", "cli", "main"]
