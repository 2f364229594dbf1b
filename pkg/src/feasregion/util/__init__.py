"""Utility modules for feasregion."""

from feasregion.util.hashing import hash_dataset
from feasregion.util.logging import get_logger, setup_logging

__all__ = [
    "get_logger",
    "hash_dataset",
    "setup_logging",
]
