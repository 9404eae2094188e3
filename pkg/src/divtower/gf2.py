"""Dense linear algebra over F2.

Rows are packed into Python ints: column ``j`` is bit ``j`` of the row.
Every function here is pure; a :class:`BitMatrix` is never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

BitVector = Union[int, str, Sequence[int]]


def popcount(x: int) -> int:
    return x.bit_count()


def parity(x: int) -> int:
    return x.bit_count() & 1


def as_bits(v: BitVector, n: int) -> int:
    """Coerce a bit vector given as int, '0'/'1' string or 0/1 sequence to an int."""
    if isinstance(v, (int, np.integer)):
        v = int(v)
        if v < 0 or v.bit_length() > n:
            raise ValueError(f"vector {v:#x} does not fit in {n} bits")
        return v
    if isinstance(v, str):
        v = v.strip()
        if len(v) != n or set(v) - {"0", "1"}:
            raise ValueError(f"expected a 0/1 string of length {n}, got {v!r}")
        return sum(1 << j for j, c in enumerate(v) if c == "1")
    seq = list(v)
    if len(seq) != n:
        raise ValueError(f"expected {n} entries, got {len(seq)}")
    out = 0
    for j, b in enumerate(seq):
        if b not in (0, 1):
            raise ValueError(f"entry {j} is {b!r}, not a bit")
        if b:
            out |= 1 << j
    return out


def bits_to_str(x: int, n: int) -> str:
    return "".join("1" if (x >> j) & 1 else "0" for j in range(n))


def bits_to_list(x: int, n: int) -> list[int]:
    return [(x >> j) & 1 for j in range(n)]


def support(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


@dataclass(frozen=True)
class BitMatrix:
    """Binary matrix with rows stored as packed ints."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self):
        if self.ncols < 0:
            raise ValueError("negative column count")
        limit = 1 << self.ncols
        for r, row in enumerate(self.rows):
            if row < 0 or row >= limit:
                raise ValueError(f"row {r} has bits outside {self.ncols} columns")

    # construction

    @classmethod
    def from_rows(cls, rows: Iterable[BitVector], ncols: Optional[int] = None) -> "BitMatrix":
        rows = list(rows)
        if ncols is None:
            if not rows:
                ncols = 0
            elif isinstance(rows[0], str):
                ncols = len(rows[0].strip())
            elif isinstance(rows[0], (int, np.integer)):
                raise ValueError("ncols is required for int rows")
            else:
                ncols = len(rows[0])
        return cls(tuple(as_bits(r, ncols) for r in rows), ncols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls((0,) * nrows, ncols)

    @classmethod
    def ones(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls(((1 << ncols) - 1,) * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(tuple(1 << j for j in range(n)), n)

    @classmethod
    def from_array(cls, a) -> "BitMatrix":
        a = np.asarray(a)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls.from_rows([[int(x) % 2 for x in row] for row in a], a.shape[1])

    # shape and access

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __getitem__(self, i: int) -> int:
        return self.rows[i]

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.uint8)
        for i, row in enumerate(self.rows):
            for j in support(row):
                out[i, j] = 1
        return out

    def to_strings(self) -> list[str]:
        return [bits_to_str(r, self.ncols) for r in self.rows]

    def __str__(self) -> str:
        return "\n".join(self.to_strings())

    # algebra

    @property
    def T(self) -> "BitMatrix":
        cols = [0] * self.ncols
        for i, row in enumerate(self.rows):
            for j in support(row):
                cols[j] |= 1 << i
        return BitMatrix(tuple(cols), self.nrows)

    def apply(self, v: BitVector) -> int:
        """Return ``A v`` over F2 as a packed int of length ``nrows``."""
        v = as_bits(v, self.ncols)
        out = 0
        for i, row in enumerate(self.rows):
            if parity(row & v):
                out |= 1 << i
        return out

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for row in self.rows:
            acc = 0
            for j in support(row):
                acc ^= other.rows[j]
            out.append(acc)
        return BitMatrix(tuple(out), other.ncols)

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return BitMatrix(tuple(a ^ b for a, b in zip(self.rows, other.rows)), self.ncols)

    def select_rows(self, idx: Iterable[int]) -> "BitMatrix":
        return BitMatrix(tuple(self.rows[i] for i in idx), self.ncols)

    def nonzero_rows(self) -> "BitMatrix":
        return BitMatrix(tuple(r for r in self.rows if r), self.ncols)

    def permute_columns(self, perm: Sequence[int]) -> "BitMatrix":
        """Column ``j`` of the result is column ``perm[j]`` of ``self``."""
        if sorted(perm) != list(range(self.ncols)):
            raise ValueError("not a permutation of the columns")
        out = []
        for row in self.rows:
            acc = 0
            for j, src in enumerate(perm):
                if (row >> src) & 1:
                    acc |= 1 << j
            out.append(acc)
        return BitMatrix(tuple(out), self.ncols)

    def reversed(self) -> "BitMatrix":
        """Reverse both row order and column order."""
        n = self.ncols
        return BitMatrix(tuple(_reverse_bits(r, n) for r in reversed(self.rows)), n)


def _reverse_bits(x: int, n: int) -> int:
    if n == 0:
        return 0
    return int(format(x, f"0{n}b")[::-1], 2)


def vstack(*mats: BitMatrix, ncols: Optional[int] = None) -> BitMatrix:
    if not mats:
        return BitMatrix((), ncols or 0)
    n = mats[0].ncols
    for m in mats:
        if m.ncols != n:
            raise ValueError("column counts differ")
    return BitMatrix(tuple(r for m in mats for r in m.rows), n)


def hstack(*mats: BitMatrix, nrows: Optional[int] = None) -> BitMatrix:
    if not mats:
        return BitMatrix((0,) * (nrows or 0), 0)
    r = mats[0].nrows
    for m in mats:
        if m.nrows != r:
            raise ValueError("row counts differ")
    rows = [0] * r
    shift = 0
    for m in mats:
        for i, row in enumerate(m.rows):
            rows[i] |= row << shift
        shift += m.ncols
    return BitMatrix(tuple(rows), shift)


# elimination


def _rref_rows(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    rows = list(rows)
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        bit = 1 << col
        pivot = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rref(a: BitMatrix) -> tuple[BitMatrix, list[int]]:
    """Reduced row echelon form; zero rows end up at the bottom."""
    rows, pivots = _rref_rows(list(a.rows), a.ncols)
    return BitMatrix(tuple(rows), a.ncols), pivots


def rank(a: BitMatrix) -> int:
    return len(_rref_rows(list(a.rows), a.ncols)[1])


def nullspace(a: BitMatrix) -> BitMatrix:
    """Basis of ``{x : A x = 0}``, one row per free column in increasing order."""
    rows, pivots = _rref_rows(list(a.rows), a.ncols)
    pivot_set = set(pivots)
    basis = []
    for f in range(a.ncols):
        if f in pivot_set:
            continue
        x = 1 << f
        for r, p in enumerate(pivots):
            if (rows[r] >> f) & 1:
                x |= 1 << p
        basis.append(x)
    return BitMatrix(tuple(basis), a.ncols)


class EchelonBasis:
    """Incremental row-span membership: reduce vectors against stored pivots."""

    def __init__(self, rows: Iterable[int] = ()):
        self._pivots: dict[int, int] = {}
        for r in rows:
            self.add(r)

    def reduce(self, v: int) -> int:
        while v:
            top = v.bit_length() - 1
            row = self._pivots.get(top)
            if row is None:
                return v
            v ^= row
        return 0

    def add(self, v: int) -> bool:
        """Insert ``v``; return False if it was already in the span."""
        v = self.reduce(v)
        if not v:
            return False
        self._pivots[v.bit_length() - 1] = v
        return True

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    def __len__(self) -> int:
        return len(self._pivots)


def in_span(a: BitMatrix, v: BitVector) -> bool:
    return as_bits(v, a.ncols) in EchelonBasis(a.rows)


def independent(a: BitMatrix) -> bool:
    return rank(a) == a.nrows


def dependent_rows(a: BitMatrix) -> Optional[list[int]]:
    """Return indices of a nontrivial combination summing to zero, or None."""
    # track combinations in the high bits beyond ncols
    n = a.ncols
    basis: dict[int, int] = {}
    for i, row in enumerate(a.rows):
        v = row | (1 << (n + i))
        while True:
            low = v & ((1 << n) - 1)
            if not low:
                return support(v >> n)
            top = low.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return None


def solve_f2(a: BitMatrix, b: BitVector) -> Optional[int]:
    """Some ``x`` with ``A x = b``, free variables zero; None if inconsistent."""
    b = as_bits(b, a.nrows)
    n = a.ncols
    aug = [row | (((b >> i) & 1) << n) for i, row in enumerate(a.rows)]
    rows, pivots = _rref_rows(aug, n)
    for r in range(len(pivots), len(rows)):
        if rows[r] >> n:
            return None
    x = 0
    for r, p in enumerate(pivots):
        if rows[r] >> n:
            x |= 1 << p
    return x


# text format


def parse_matrix(text: str, ncols: Optional[int] = None) -> BitMatrix:
    """Parse rows of '0'/'1' characters; a blank line ends the matrix."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            if rows:
                break
            continue
        if set(line) - {"0", "1"}:
            raise ValueError(f"line {lineno}: not a 0/1 row: {line!r}")
        if ncols is None:
            ncols = len(line)
        if len(line) != ncols:
            raise ValueError(f"line {lineno}: expected {ncols} columns, got {len(line)}")
        rows.append(line)
    return BitMatrix.from_rows(rows, ncols or 0)


def format_matrix(a: BitMatrix) -> str:
    return "".join(s + "\n" for s in a.to_strings())
