"""Weighted divisibility of binary row sets.

A coefficient vector ``t`` of odd integers defines the level-``nu`` norm
``sum_i v_i t_i mod 2**nu``. A set of independent rows is ``nu``-orthogonal
when ``2**(|a|-1) * sum_i AND(a)_i t_i = 0 mod 2**nu`` for every row subset
``a`` with ``2 <= |a| <= nu``; :func:`additivity_oracle` and
:func:`disjoint_span_oracle` test the two equivalent formulations by brute
force.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Iterator, Optional, Sequence

from .gf2 import BitMatrix, BitVector, as_bits, dependent_rows, support, vstack
from .modring import CongruenceSystem, solve_mod2k

MAX_CONGRUENCE_ROWS = 1 << 16
MAX_ORACLE_ROWS = 20


@dataclass(frozen=True)
class Verdict:
    """Outcome of a predicate; falsy on failure, always carrying a witness then."""

    ok: bool
    witness: Any = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


PASS = Verdict(True)


class DependentRowsError(ValueError):
    def __init__(self, rows: list[int]):
        super().__init__(f"rows {rows} are F2-linearly dependent")
        self.rows = rows


@dataclass(frozen=True)
class CoeffVector:
    """Odd integers modulo ``2**nu`` in canonical range."""

    values: tuple[int, ...]
    nu: int

    def __post_init__(self):
        if self.nu < 1:
            raise ValueError("level must be >= 1")
        mod = 1 << self.nu
        vals = tuple(int(x) % mod for x in self.values)
        for i, x in enumerate(vals):
            if x % 2 == 0:
                raise ValueError(f"coefficient t[{i}] = {self.values[i]} is even")
        object.__setattr__(self, "values", vals)

    @classmethod
    def ones(cls, n: int, nu: int) -> "CoeffVector":
        return cls((1,) * n, nu)

    @property
    def modulus(self) -> int:
        return 1 << self.nu

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def at_level(self, nu: int) -> "CoeffVector":
        return CoeffVector(self.values, nu)


def weighted_sum(x: int, t: Sequence[int]) -> int:
    return sum(t[j] for j in support(x))


def nu_norm(v: BitVector, t: CoeffVector) -> int:
    return weighted_sum(as_bits(v, len(t)), t.values) % t.modulus


def weighted_overlap(a: BitMatrix, subset: Sequence[int], t: CoeffVector) -> int:
    """Unreduced ``sum_i AND(rows in subset)_i * t_i``."""
    if not subset:
        raise ValueError("subset must be nonempty")
    if a.ncols != len(t):
        raise ValueError("length mismatch between matrix and coefficient vector")
    acc = (1 << a.ncols) - 1
    for r in subset:
        if not 0 <= r < a.nrows:
            raise IndexError(f"row index {r} out of range")
        acc &= a.rows[r]
    return weighted_sum(acc, t.values)


@dataclass(frozen=True)
class SubsetFailure:
    subset: tuple[int, ...]
    value: int
    modulus: int

    def __str__(self) -> str:
        return f"rows {list(self.subset)}: 2^{len(self.subset) - 1}*overlap = {self.value} != 0 mod {self.modulus}"


def _subset_ands(rows: Sequence[int], max_size: int, ncols: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Yield (subset, AND of rows) for 2 <= |subset| <= max_size in lexicographic order.

    Subsets whose AND is already zero are pruned along with their extensions.
    """
    full = (1 << ncols) - 1

    def rec(start: int, chosen: tuple[int, ...], acc: int):
        for r in range(start, len(rows)):
            nxt = acc & rows[r]
            if not nxt:
                continue
            sub = chosen + (r,)
            if len(sub) >= 2:
                yield sub, nxt
            if len(sub) < max_size:
                yield from rec(r + 1, sub, nxt)

    yield from rec(0, (), full)


def _check_lengths(a: BitMatrix, t: CoeffVector):
    if a.ncols != len(t):
        raise ValueError(f"matrix has {a.ncols} columns but t has length {len(t)}")


def is_nu_orthogonal(a: BitMatrix, t: CoeffVector) -> Verdict:
    """Subset congruences at the level of ``t``; zero rows are ignored.

    Raises DependentRowsError if the nonzero rows are F2-dependent.
    """
    _check_lengths(a, t)
    index = [i for i, r in enumerate(a.rows) if r]
    rows = [a.rows[i] for i in index]
    dep = dependent_rows(BitMatrix(tuple(rows), a.ncols))
    if dep is not None:
        raise DependentRowsError([index[i] for i in dep])
    nu, mod = t.nu, t.modulus
    for sub, acc in _subset_ands(rows, nu, a.ncols):
        value = ((1 << (len(sub) - 1)) * weighted_sum(acc, t.values)) % mod
        if value:
            orig = tuple(index[i] for i in sub)
            fail = SubsetFailure(orig, value, mod)
            return Verdict(False, fail, str(fail))
    return PASS


def is_nu_null(a: BitMatrix, t: CoeffVector) -> Verdict:
    _check_lengths(a, t)
    for i, row in enumerate(a.rows):
        norm = weighted_sum(row, t.values) % t.modulus
        if norm:
            return Verdict(False, i, f"row {i} has norm {norm}, expected 0 mod {t.modulus}")
    return PASS


def is_nu_orthonormal(a: BitMatrix, t: CoeffVector) -> Verdict:
    _check_lengths(a, t)
    for i, row in enumerate(a.rows):
        norm = weighted_sum(row, t.values) % t.modulus
        if norm != 1:
            return Verdict(False, i, f"row {i} has norm {norm}, expected 1 mod {t.modulus}")
    return PASS


def additivity_oracle(a: BitMatrix, t: CoeffVector) -> Verdict:
    """Norm of every F2 row sum equals the sum of row norms, by enumeration."""
    _check_lengths(a, t)
    m = a.nrows
    if m > MAX_ORACLE_ROWS:
        raise ValueError(f"{m} rows exceeds the enumeration limit {MAX_ORACLE_ROWS}")
    mod = t.modulus
    norms = [weighted_sum(r, t.values) for r in a.rows]
    # Gray code walk over all subsets
    vec, total, mask = 0, 0, 0
    for step in range(1, 1 << m):
        r = (step & -step).bit_length() - 1
        vec ^= a.rows[r]
        mask ^= 1 << r
        total += norms[r] if (mask >> r) & 1 else -norms[r]
        if (weighted_sum(vec, t.values) - total) % mod:
            sub = support(mask)
            return Verdict(False, sub, f"rows {sub}: norm of sum differs from sum of norms mod {mod}")
    return PASS


def disjoint_span_oracle(a: BitMatrix, t: CoeffVector) -> Verdict:
    """Every pair of disjoint row subsets spans ``nu``-orthogonal subspaces."""
    _check_lengths(a, t)
    m = a.nrows
    if m > 12:
        raise ValueError("disjoint span oracle is limited to 12 rows")
    half = 1 << (t.nu - 1)
    # assign each row to neither side, side P, or side Q; sums over P and Q
    for code in range(3 ** m):
        v = w = 0
        p, q, c = [], [], code
        for r in range(m):
            c, side = divmod(c, 3)
            if side == 1:
                v ^= a.rows[r]
                p.append(r)
            elif side == 2:
                w ^= a.rows[r]
                q.append(r)
        if p and q and weighted_sum(v & w, t.values) % half:
            return Verdict(False, (p, q), f"sums over rows {p} and {q} are not orthogonal mod {half}")
    return PASS


def check_products(L: BitMatrix, S: BitMatrix) -> Verdict:
    """``S S^T = 0``, ``S L^T = 0`` and ``L L^T = I`` on the nonzero rows of L, mod 2."""
    if L.ncols != S.ncols:
        raise ValueError("L and S have different column counts")
    for i, a in enumerate(S.rows):
        for j, b in enumerate(S.rows):
            if j >= i and (a & b).bit_count() & 1:
                return Verdict(False, ("SS", i, j), f"S[{i}].S[{j}] = 1")
    for i, a in enumerate(S.rows):
        for j, b in enumerate(L.rows):
            if (a & b).bit_count() & 1:
                return Verdict(False, ("SL", i, j), f"S[{i}].L[{j}] = 1")
    for i, a in enumerate(L.rows):
        if not a:
            continue
        for j, b in enumerate(L.rows):
            if j < i or not b:
                continue
            want = int(i == j)
            if (a & b).bit_count() & 1 != want:
                return Verdict(False, ("LL", i, j), f"L[{i}].L[{j}] != {want}")
    return PASS


def coefficient_system(L: BitMatrix, S: BitMatrix, nu: int) -> CongruenceSystem:
    """Congruences in ``t`` for: [L;S] nu-orthogonal, S nu-null, nonzero L rows norm 1."""
    n = L.ncols
    mod = 1 << nu
    g_rows = [r for r in L.rows if r] + list(S.rows)
    A: list[tuple[int, ...]] = []
    v: list[int] = []

    def as_row(x: int, scale: int) -> tuple[int, ...]:
        return tuple(scale % mod if (x >> j) & 1 else 0 for j in range(n))

    for r in L.rows:
        if r:
            A.append(as_row(r, 1))
            v.append(1)
    for r in S.rows:
        A.append(as_row(r, 1))
        v.append(0)
    for sub, acc in _subset_ands(g_rows, nu, n):
        A.append(as_row(acc, 1 << (len(sub) - 1)))
        v.append(0)
        if len(A) > MAX_CONGRUENCE_ROWS:
            raise ValueError(f"instance too large: more than {MAX_CONGRUENCE_ROWS} congruences")
    return CongruenceSystem(tuple(A), tuple(v), nu, n)


def find_coefficient_vector(L: BitMatrix, S: BitMatrix, nu: int) -> Optional[CoeffVector]:
    """An odd ``t`` making [L;S] nu-orthogonal, S nu-null and L nu-orthonormal.

    Returns None when the congruences have no odd solution, which can happen
    for ``nu > 2`` even on triorthogonal input.
    """
    if nu < 2:
        raise ValueError("level must be >= 2")
    pre = check_products(L, S)
    if not pre:
        raise ValueError(f"precondition violated: {pre.detail}")
    dep = dependent_rows(S)
    if dep is not None:
        raise DependentRowsError(dep)
    n = L.ncols
    if n == 0:
        return CoeffVector((), nu)
    system = coefficient_system(L, S, nu)
    x = solve_mod2k(system, seed=[1] * n, seed_nu=1)
    if x is None:
        return None
    t = CoeffVector(tuple(x), nu)
    assert is_nu_orthogonal(vstack(L, S), t)
    return t


def is_triorthogonal(g: BitMatrix) -> Verdict:
    """Every pair and triple of distinct rows has even overlap."""
    for size in (2, 3):
        for sub in combinations(range(g.nrows), size):
            acc = (1 << g.ncols) - 1
            for r in sub:
                acc &= g.rows[r]
            if acc.bit_count() & 1:
                return Verdict(False, sub, f"rows {list(sub)} overlap in {acc.bit_count()} positions")
    return PASS


@dataclass(frozen=True)
class OrthoPair:
    """Logical rows L, stabilizer rows S and a coefficient vector.

    Construction checks shapes only; :func:`pair_report` evaluates the
    divisibility predicates.
    """

    L: BitMatrix
    S: BitMatrix
    t: CoeffVector
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if not (self.L.ncols == self.S.ncols == len(self.t)):
            raise ValueError(f"column counts differ: L {self.L.ncols}, S {self.S.ncols}, t {len(self.t)}")

    @property
    def n(self) -> int:
        return self.L.ncols

    @property
    def nu(self) -> int:
        return self.t.nu

    @property
    def G(self) -> BitMatrix:
        return vstack(self.L, self.S)


def pair_report(pair: OrthoPair) -> list[tuple[str, Verdict]]:
    """All OrthoPair predicates in a fixed order."""
    out: list[tuple[str, Verdict]] = []
    dep = dependent_rows(pair.S)
    out.append(("S independent", PASS if dep is None else Verdict(False, dep, f"rows {dep} of S sum to zero")))
    out.append(("products mod 2", check_products(pair.L, pair.S)))
    out.append(("S nu-null", is_nu_null(pair.S, pair.t)))
    live = [i for i, r in enumerate(pair.L.rows) if r]
    norm = is_nu_orthonormal(pair.L.select_rows(live), pair.t)
    if not norm:
        i = live[norm.witness]
        norm = Verdict(False, i, f"L row {i} has norm {nu_norm(pair.L.rows[i], pair.t)}, expected 1 mod {pair.t.modulus}")
    out.append(("L nu-orthonormal", norm))
    try:
        orth = is_nu_orthogonal(pair.G, pair.t)
    except DependentRowsError as err:
        orth = Verdict(False, err.rows, str(err))
    out.append(("[L;S] nu-orthogonal", orth))
    return out
