"""Point-set files: a one-line header "<domain> <dim>" followed by one
whitespace-separated point per line. Hamming points are 0/1 integers,
sphere and euclidean points are floats (sphere rows must be unit norm).
"""

from __future__ import annotations

import numpy as np

from .core import DOMAIN_TAGS


def read_dataset(path: str) -> tuple[str, np.ndarray]:
    """Parse a dataset file into (domain_tag, points array)."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2 or header[0] not in DOMAIN_TAGS:
            raise ValueError(
                f"{path}: header must be '<domain> <dim>' with domain one of {DOMAIN_TAGS}"
            )
        domain = header[0]
        dim = int(header[1])
        if dim < 1:
            raise ValueError(f"{path}: dimension must be positive")
        body = fh.read().split("\n")
    rows = [line.split() for line in body if line.strip()]
    if any(len(r) != dim for r in rows):
        raise ValueError(f"{path}: every point needs exactly {dim} coordinates")
    if domain == "hamming":
        # an empty body is a legal (if dull) dataset
        points = np.array(rows, dtype=np.uint8).reshape(len(rows), dim)
        if not np.isin(points, (0, 1)).all():
            raise ValueError(f"{path}: hamming points must be 0/1")
    else:
        points = np.array(rows, dtype=float).reshape(len(rows), dim)
        if domain == "sphere" and len(rows):
            norms = np.linalg.norm(points, axis=1)
            if not np.allclose(norms, 1.0, atol=1e-6):
                raise ValueError(f"{path}: sphere points must have unit norm")
    return domain, points


def write_dataset(path: str, domain: str, points: np.ndarray) -> None:
    """Write points in the dataset format read_dataset accepts."""
    if domain not in DOMAIN_TAGS:
        raise ValueError(f"unknown domain {domain!r}")
    points = np.asarray(points)
    if points.ndim != 2:
        raise ValueError("points must be a 2-D array")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{domain} {points.shape[1]}\n")
        if domain == "hamming":
            for row in points:
                fh.write(" ".join(str(int(v)) for v in row) + "\n")
        else:
            for row in points:
                fh.write(" ".join(format(float(v), ".17g") for v in row) + "\n")
