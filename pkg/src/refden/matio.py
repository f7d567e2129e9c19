"""Plain-text matrix files: one row per line, whitespace or comma delimited.

Values are written with 17 significant digits, which round-trips float64
bit-exactly.  Lines starting with ``#`` and blank lines are ignored on read.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError
from .linalg import as_matrix


def read_matrix(path) -> np.ndarray:
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            tokens = stripped.replace(",", " ").split()
            try:
                row = [float(tok) for tok in tokens]
            except ValueError as exc:
                raise InvalidInputError(
                    f"{path}:{lineno}: unparseable value ({exc})"
                ) from exc
            if rows and len(row) != len(rows[0]):
                raise InvalidInputError(
                    f"{path}:{lineno}: row has {len(row)} entries, expected {len(rows[0])}"
                )
            rows.append(row)
    if not rows:
        raise InvalidInputError(f"{path}: no matrix rows found")
    return as_matrix(np.array(rows), f"matrix from {path}")


def write_matrix(path, a, comment: str | None = None) -> None:
    arr = as_matrix(a)
    with open(path, "w", encoding="utf-8") as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        for row in arr:
            fh.write(" ".join(f"{v:.17g}" for v in row))
            fh.write("\n")
