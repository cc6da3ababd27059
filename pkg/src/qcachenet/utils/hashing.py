"""
Deterministic Hashing
Config fingerprints and order-independent seed derivation
"""
import hashlib
from typing import Any


def config_fingerprint(config_text: str, normalize: bool = True) -> str:
    """
    Generate SHA-256 fingerprint of an effective config.

    Args:
        config_text: Config rendered as key = value lines
        normalize: Whether to drop comments, blank lines and spacing before hashing

    Returns:
        Hexadecimal SHA-256 hash string
    """
    if normalize:
        lines = []
        for line in config_text.splitlines():
            line = line.split('#', 1)[0].strip()
            if line:
                lines.append(' '.join(line.split()))
        config_text = '\n'.join(lines)

    return hashlib.sha256(config_text.encode('utf-8')).hexdigest()


def derive_seed(root_seed: int, *coordinates: Any) -> int:
    """
    Derive a 32-bit seed from a root seed and grid coordinates.

    The same coordinates always give the same seed, whatever order the
    grid is evaluated in.
    """
    combined = ':'.join([str(int(root_seed))] + [repr(c) for c in coordinates])
    return int.from_bytes(hashlib.sha256(combined.encode()).digest()[:4], 'big')
