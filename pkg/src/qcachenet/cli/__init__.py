"""Command-line interface for qcachenet experiments."""
from .main import main, build_parser

__all__ = ["main", "build_parser"]
