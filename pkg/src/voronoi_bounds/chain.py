"""Integer chain complexes and their on-disk formats.

Boundary matrices use the row convention: ``boundary[k]`` has one row per
cell of degree k and one column per cell of degree k-1, so row sigma holds
the coefficients n_{sigma sigma'} of d(sigma).

Two serialisations are supported:

* JSON: ``{"cells": {"k": [labels...]}, "boundary": {"k": [[...], ...]}, "meta": {...}}``
* text: for each degree k (ascending) a header line ``k rows cols nnz``
  followed by ``nnz`` lines ``i j value`` (1-based), describing d_k.
  The lowest degree appears with ``cols = 0``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path


class ComplexError(ValueError):
    pass


@dataclass
class ChainComplexZ:
    cells: dict[int, list[str]]
    boundary: dict[int, list[list[int]]]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.cells = {int(k): list(v) for k, v in self.cells.items()}
        self.boundary = {int(k): [list(map(int, r)) for r in v] for k, v in self.boundary.items()}
        for k, mat in self.boundary.items():
            rows, cols = self.size(k), self.size(k - 1)
            if len(mat) != rows or any(len(r) != cols for r in mat):
                raise ComplexError(f"d_{k} has shape inconsistent with cells ({rows}x{cols})")

    def size(self, k: int) -> int:
        return len(self.cells.get(k, ()))

    @property
    def degrees(self) -> list[int]:
        return sorted(k for k, v in self.cells.items() if v)

    def d(self, k: int) -> list[list[int]]:
        """d_k : C_k -> C_{k-1} as a |Sigma_k| x |Sigma_{k-1}| matrix (zero if absent)."""
        if k in self.boundary:
            return self.boundary[k]
        return [[0] * self.size(k - 1) for _ in range(self.size(k))]

    def check_dd(self) -> bool:
        """True iff d_k o d_{k+1} = 0 for all k."""
        for k in self.degrees:
            upper, lower = self.d(k + 1), self.d(k)
            if not upper or not lower or not lower[0]:
                continue
            for row in upper:
                for j in range(len(lower[0])):
                    if sum(row[i] * lower[i][j] for i in range(len(row)) if row[i]):
                        return False
        return True

    def permuted(self, perms: dict[int, list[int]]) -> "ChainComplexZ":
        """Reorder the cells of each degree: new position i holds old cell perms[k][i]."""
        cells, boundary = {}, {}
        for k, labels in self.cells.items():
            p = perms.get(k, list(range(len(labels))))
            cells[k] = [labels[i] for i in p]
        for k, mat in self.boundary.items():
            pr = perms.get(k, list(range(self.size(k))))
            pc = perms.get(k - 1, list(range(self.size(k - 1))))
            boundary[k] = [[mat[i][j] for j in pc] for i in pr]
        return ChainComplexZ(cells, boundary, dict(self.meta))

    # --- serialisation ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "cells": {str(k): v for k, v in sorted(self.cells.items())},
            "boundary": {str(k): v for k, v in sorted(self.boundary.items())},
            "meta": self.meta,
        }

    @classmethod
    def from_json(cls, data) -> "ChainComplexZ":
        if isinstance(data, str) and data.lstrip().startswith("{"):
            data = json.loads(data)
        elif isinstance(data, (str, Path)):
            data = json.loads(Path(data).read_text())
        if "complex" in data and "cells" not in data:
            data = data["complex"]
        return cls(data["cells"], data.get("boundary", {}), data.get("meta", {}))

    def to_text(self) -> str:
        lines = []
        for k in self.degrees:
            mat = self.d(k)
            rows, cols = self.size(k), self.size(k - 1)
            trip = [(i + 1, j + 1, v) for i, r in enumerate(mat) for j, v in enumerate(r) if v]
            lines.append(f"{k} {rows} {cols} {len(trip)}")
            lines.extend(f"{i} {j} {v}" for i, j, v in trip)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ChainComplexZ":
        sizes: dict[int, int] = {}
        boundary: dict[int, list[list[int]]] = {}
        for k, rows, cols, trip in _parse_blocks(text, 4):
            for deg, size in ((k, rows), (k - 1, cols)):
                if size and sizes.get(deg, size) != size:
                    raise ComplexError(f"inconsistent size for degree {deg}")
                if size:
                    sizes[deg] = size
            if cols:
                mat = [[0] * cols for _ in range(rows)]
                for i, j, v in trip:
                    mat[i - 1][j - 1] = v
                boundary[k] = mat
        cells = {k: [f"c{k}_{i}" for i in range(n)] for k, n in sizes.items()}
        return cls(cells, boundary)


def _parse_blocks(text: str, header_len: int):
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith(("%", "#"))]
    pos = 0
    while pos < len(lines):
        head = lines[pos]
        if len(head) != header_len:
            raise ComplexError(f"expected a {header_len}-field header, got {' '.join(head)!r}")
        head = list(map(int, head))
        nnz = head[-1]
        trip = [tuple(map(int, t)) for t in lines[pos + 1 : pos + 1 + nnz]]
        if len(trip) != nnz or any(len(t) != 3 for t in trip):
            raise ComplexError("truncated or malformed triple block")
        yield (*head[:-1], trip)
        pos += 1 + nnz


def read_matrix_text(text: str) -> list[list[int]]:
    """A single sparse integer matrix: header ``rows cols nnz`` then ``i j value`` triples."""
    blocks = list(_parse_blocks(text, 3))
    if len(blocks) != 1:
        raise ComplexError("expected exactly one matrix block")
    rows, cols, trip = blocks[0]
    mat = [[0] * cols for _ in range(rows)]
    for i, j, v in trip:
        mat[i - 1][j - 1] = v
    return mat


def write_matrix_text(mat: list[list[int]]) -> str:
    rows = len(mat)
    cols = len(mat[0]) if mat else 0
    trip = [(i + 1, j + 1, v) for i, r in enumerate(mat) for j, v in enumerate(r) if v]
    return "\n".join([f"{rows} {cols} {len(trip)}"] + [f"{i} {j} {v}" for i, j, v in trip]) + "\n"


def sniff_text(text: str) -> str:
    """'matrix' or 'complex', judged by the width of the first header line."""
    for ln in text.splitlines():
        if ln.strip() and not ln.lstrip().startswith(("%", "#")):
            return "complex" if len(ln.split()) == 4 else "matrix"
    raise ComplexError("empty input")
