"""Dense matrices and vectors over exact rationals, with JSON/CSV round trips.

Kept deliberately small: dense storage, naive cubic products that skip zero
entries (the leg matrices are sparse in practice), and string serialization
with entries in canonical "p/q" form alongside row/column label lists.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Sequence

from ._rat import Rat, parse_rat, rat_str

__all__ = ["RationalMatrix", "matrix_to_json", "matrix_from_json", "matrix_to_csv", "matrix_from_csv"]

_ZERO = Rat(0)
_ONE = Rat(1)


class RationalMatrix:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence]) -> None:
        self.data = [[Rat(v) for v in row] for row in data]
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        if any(len(row) != self.cols for row in self.data):
            raise ValueError("ragged rows")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        m = cls.__new__(cls)
        m.data = [[_ZERO] * cols for _ in range(rows)]
        m.rows, m.cols = rows, cols
        return m

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        m = cls.zeros(n, n)
        for i in range(n):
            m.data[i][i] = _ONE
        return m

    @classmethod
    def from_rows(cls, data) -> "RationalMatrix":
        """Adopt pre-built rows of Rat without copying or re-validating values."""
        m = cls.__new__(cls)
        m.data = [list(row) for row in data]
        m.rows = len(m.data)
        m.cols = len(m.data[0]) if m.data else 0
        if any(len(row) != m.cols for row in m.data):
            raise ValueError("ragged rows")
        return m

    def __getitem__(self, ij) -> object:
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> list:
        return list(self.data[i])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        raise TypeError("RationalMatrix is unhashable")

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols})"

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = RationalMatrix.zeros(self.rows, other.cols)
        odata = other.data
        for i, arow in enumerate(self.data):
            orow = out.data[i]
            for t, a in enumerate(arow):
                if a:
                    brow = odata[t]
                    for j, b in enumerate(brow):
                        if b:
                            orow[j] += a * b
        return out

    def vec_mul(self, v: Sequence) -> list:
        """Row vector times matrix: (v P)_j."""
        if len(v) != self.rows:
            raise ValueError("vector length mismatch")
        out = [_ZERO] * self.cols
        for i, a in enumerate(v):
            if a:
                row = self.data[i]
                for j, b in enumerate(row):
                    if b:
                        out[j] += a * b
        return out

    def mul_vec(self, v: Sequence) -> list:
        """Matrix times column vector: (P v)_i."""
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return [sum((a * b for a, b in zip(row, v) if a and b), _ZERO) for row in self.data]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix.from_rows(zip(*self.data)) if self.data else self

    def scaled(self, c) -> "RationalMatrix":
        c = Rat(c)
        return RationalMatrix.from_rows([[c * v for v in row] for row in self.data])

    def is_row_stochastic(self) -> bool:
        one = Rat(1)
        return all(
            all(v >= 0 for v in row) and sum(row, _ZERO) == one for row in self.data
        )

    def row_sums(self) -> list:
        return [sum(row, _ZERO) for row in self.data]

    def to_float_array(self):
        import numpy as np

        return np.array([[float(v) for v in row] for row in self.data], dtype=float)

    @classmethod
    def block_flip(cls, a: "RationalMatrix", b: "RationalMatrix") -> "RationalMatrix":
        """The square block matrix [[0, a], [b, 0]]."""
        if a.rows != b.cols or a.cols != b.rows:
            raise ValueError("blocks do not fit a square block-flip matrix")
        n = a.rows + b.rows
        m = cls.zeros(n, n)
        for i in range(a.rows):
            m.data[i][a.rows :] = list(a.data[i])
        for i in range(b.rows):
            m.data[a.rows + i][: b.cols] = list(b.data[i])
        return m


def matrix_to_json(m: RationalMatrix, row_labels: Sequence[str], col_labels: Sequence[str]) -> dict:
    if len(row_labels) != m.rows or len(col_labels) != m.cols:
        raise ValueError("label count mismatch")
    return {
        "rows": m.rows,
        "cols": m.cols,
        "row_labels": list(row_labels),
        "col_labels": list(col_labels),
        "entries": [[rat_str(v) for v in row] for row in m.data],
    }


def matrix_from_json(obj: dict) -> tuple[RationalMatrix, list[str], list[str]]:
    m = RationalMatrix.from_rows(
        [[parse_rat(s) for s in row] for row in obj["entries"]]
    )
    return m, list(obj["row_labels"]), list(obj["col_labels"])


def matrix_to_csv(m: RationalMatrix, row_labels: Sequence[str], col_labels: Sequence[str]) -> str:
    if len(row_labels) != m.rows or len(col_labels) != m.cols:
        raise ValueError("label count mismatch")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([""] + list(col_labels))
    for label, row in zip(row_labels, m.data):
        w.writerow([label] + [rat_str(v) for v in row])
    return buf.getvalue()


def matrix_from_csv(text: str) -> tuple[RationalMatrix, list[str], list[str]]:
    rows = list(csv.reader(io.StringIO(text)))
    col_labels = rows[0][1:]
    row_labels = [r[0] for r in rows[1:]]
    m = RationalMatrix.from_rows([[parse_rat(s) for s in r[1:]] for r in rows[1:]])
    return m, row_labels, col_labels


def loads_matrix(text: str) -> tuple[RationalMatrix, list[str], list[str]]:
    return matrix_from_json(json.loads(text))
