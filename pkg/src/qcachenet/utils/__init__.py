"""Utility functions for reproducible experiment runs."""
from .hashing import config_fingerprint, derive_seed

__all__ = ['config_fingerprint', 'derive_seed']
