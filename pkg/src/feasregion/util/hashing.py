"""Dataset hashing utilities for reproducibility."""

import hashlib
from pathlib import Path
from typing import Optional


def hash_dataset(
    observations_path: Path,
    nutrients_path: Path,
    bounds_path: Optional[Path] = None,
) -> str:
    """Compute a combined hash of the diet dataset files.

    The hash identifies the exact inputs behind a case-study report so two
    reports can be compared only when they were built from the same data.

    Args:
        observations_path: Path to the observations CSV
        nutrients_path: Path to the nutrients CSV
        bounds_path: Optional path to the bounds JSON

    Returns:
        SHA-256 hash of the combined file contents
    """
    sha256 = hashlib.sha256()

    for path in (observations_path, nutrients_path, bounds_path):
        if path is None or not Path(path).exists():
            continue
        with open(path, "rb") as f:
            sha256.update(f.read())

    return sha256.hexdigest()
