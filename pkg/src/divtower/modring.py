"""Linear congruences modulo powers of two.

Residues are always stored as canonical representatives in ``[0, 2**nu)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .gf2 import BitMatrix, dependent_rows, solve_f2, support


def valuation2(x: int, cap: int) -> int:
    """2-adic valuation of ``x``, with zero mapped to ``cap``."""
    if x == 0:
        return cap
    return min((x & -x).bit_length() - 1, cap)


@dataclass(frozen=True)
class CongruenceSystem:
    """``A x = v (mod 2**nu)`` with A an integer matrix."""

    A: tuple[tuple[int, ...], ...]
    v: tuple[int, ...]
    nu: int
    ncols: int

    def __post_init__(self):
        if self.nu < 1:
            raise ValueError("nu must be >= 1")
        if len(self.A) != len(self.v):
            raise ValueError("rows(A) != len(v)")
        mod = 1 << self.nu
        for i, row in enumerate(self.A):
            if len(row) != self.ncols:
                raise ValueError(f"row {i} has {len(row)} entries, expected {self.ncols}")
        object.__setattr__(self, "A", tuple(tuple(x % mod for x in row) for row in self.A))
        object.__setattr__(self, "v", tuple(x % mod for x in self.v))

    @classmethod
    def build(cls, A: Sequence[Sequence[int]], v: Sequence[int], nu: int,
              ncols: Optional[int] = None) -> "CongruenceSystem":
        A = [tuple(int(x) for x in row) for row in A]
        if ncols is None:
            if not A:
                raise ValueError("ncols is required for an empty system")
            ncols = len(A[0])
        return cls(tuple(A), tuple(int(x) for x in v), nu, ncols)

    @property
    def modulus(self) -> int:
        return 1 << self.nu

    def residual(self, x: Sequence[int]) -> list[int]:
        mod = self.modulus
        return [(sum(a * b for a, b in zip(row, x)) - vi) % mod for row, vi in zip(self.A, self.v)]

    def satisfied_by(self, x: Sequence[int]) -> bool:
        return not any(self.residual(x))


def _bit_dot(row: int, x: Sequence[int]) -> int:
    return sum(x[j] for j in support(row))


def lift_solution(A: BitMatrix, v: Sequence[int], u: Sequence[int], nu: int) -> list[int]:
    """Lift a solution of ``A x = v`` from modulo ``2**(nu-1)`` to modulo ``2**nu``.

    ``A`` must have F2-independent rows. The result agrees with ``u`` modulo
    ``2**(nu-1)``. Each defect is ``0`` or ``2**(nu-1)``, so the correction is
    ``2**(nu-1)`` times an F2 solution of ``A eps = defect / 2**(nu-1)``.
    Elimination runs from the last row upward, pivoting on the rightmost
    available column.
    """
    if nu < 2:
        raise ValueError("nu must be >= 2")
    if len(v) != A.nrows or len(u) != A.ncols:
        raise ValueError("shape mismatch")
    dep = dependent_rows(A)
    if dep is not None:
        raise ValueError(f"rows of A are F2-dependent: rows {dep} sum to zero")
    mod, half = 1 << nu, 1 << (nu - 1)
    u = [int(x) % half for x in u]
    defect = 0
    for i, row in enumerate(A.rows):
        d = (_bit_dot(row, u) - int(v[i])) % mod
        if d % half:
            raise ValueError(f"seed fails row {i}: A u - v = {d} is not 0 mod {half}")
        if d:
            defect |= 1 << i
    # pivot convention: reverse rows and columns, then lowest-index elimination
    eps_rev = solve_f2(A.reversed(), _reverse(defect, A.nrows))
    assert eps_rev is not None, "independent rows always admit a solution"
    eps = _reverse(eps_rev, A.ncols)
    return [(x - half * ((eps >> j) & 1)) % mod for j, x in enumerate(u)]


def _reverse(x: int, n: int) -> int:
    return int(format(x, f"0{n}b")[::-1], 2) if n else 0


def _smith_solve(A: list[list[int]], b: list[int], ncols: int, e: int) -> Optional[list[int]]:
    """Solve ``A x = b (mod 2**e)`` by diagonalizing with unimodular row/column ops."""
    mod = 1 << e
    if e == 0:
        return [0] * ncols
    A = [[x % mod for x in row] for row in A]
    b = [x % mod for x in b]
    m, n = len(A), ncols
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    diag: list[int] = []
    r = 0
    while r < min(m, n):
        best = None
        for i in range(r, m):
            for j in range(r, n):
                if A[i][j]:
                    val = valuation2(A[i][j], e)
                    if best is None or val < best[0]:
                        best = (val, i, j)
                        if val == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        k, pi, pj = best
        A[r], A[pi] = A[pi], A[r]
        b[r], b[pi] = b[pi], b[r]
        if pj != r:
            for row in A:
                row[r], row[pj] = row[pj], row[r]
            for row in V:
                row[r], row[pj] = row[pj], row[r]
        unit_inv = pow(A[r][r] >> k, -1, mod)
        for i in range(m):
            if i != r and A[i][r]:
                f = ((A[i][r] >> k) * unit_inv) % mod
                A[i] = [(x - f * y) % mod for x, y in zip(A[i], A[r])]
                b[i] = (b[i] - f * b[r]) % mod
        for j in range(r + 1, n):
            if A[r][j]:
                f = ((A[r][j] >> k) * unit_inv) % mod
                A[r][j] = 0
                for row in V:
                    row[j] = (row[j] - f * row[r]) % mod
        diag.append(k)
        r += 1
    y = [0] * n
    for i, k in enumerate(diag):
        if b[i] % (1 << k):
            return None
        unit_inv = pow(A[i][i] >> k, -1, mod)
        y[i] = ((b[i] >> k) * unit_inv) % (1 << (e - k))
    for i in range(len(diag), m):
        if b[i]:
            return None
    return [sum(V[i][j] * y[j] for j in range(n)) % mod for i in range(n)]


def solve_mod2k(system: CongruenceSystem, seed: Optional[Sequence[int]] = None,
                seed_nu: int = 1) -> Optional[list[int]]:
    """Solve ``A x = v (mod 2**nu)``; None if no solution exists.

    With ``seed`` the solution is restricted to ``x = seed (mod 2**seed_nu)``;
    a seed that violates the system modulo ``2**seed_nu`` yields None.
    Rows whose entries are all even are handled by the diagonalization, which
    divides out their power of two.
    """
    nu, n = system.nu, system.ncols
    mod = system.modulus
    A = [list(row) for row in system.A]
    if seed is None:
        x = _smith_solve(A, list(system.v), n, nu)
        if x is not None:
            assert system.satisfied_by(x)
        return x
    if len(seed) != n:
        raise ValueError("seed length mismatch")
    s = min(seed_nu, nu)
    base = [int(x) % (1 << s) for x in seed]
    rhs = system.residual(base)  # A base - v
    if any(x % (1 << s) for x in rhs):
        return None
    if s == nu:
        return base
    # x = base + 2^s y  =>  A y = (v - A base) / 2^s  (mod 2^(nu-s))
    target = [((-x) % mod) >> s for x in rhs]
    y = _smith_solve(A, target, n, nu - s)
    if y is None:
        return None
    x = [(bi + (yi << s)) % mod for bi, yi in zip(base, y)]
    assert system.satisfied_by(x)
    return x
