"""Built-in code families and the column permutations relating lifts to known codes."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .css import CssCode, build_css, distance_z, normal_basis
from .gf2 import BitMatrix, EchelonBasis, hstack, nullspace, rank, vstack
from .ortho import OrthoPair, PASS, Verdict, find_coefficient_vector


def _pair(L: BitMatrix, S: BitMatrix, nu: int, **meta) -> OrthoPair:
    t = find_coefficient_vector(L, S, nu)
    if t is None:
        raise ValueError(f"no coefficient vector at level {nu}")
    return OrthoPair(L, S, t, meta=meta)


def steane() -> OrthoPair:
    S = BitMatrix.from_rows(["1010101", "0110011", "0001111"])
    L = BitMatrix.ones(1, 7)
    return _pair(L, S, 2, name="steane")


def hcode(k: int) -> OrthoPair:
    """H-code on k+4 qubits: L = [0 I_k 1 1], S = [I_2 1 I_2]."""
    if k < 2 or k % 2:
        raise ValueError("k must be even and >= 2")
    n = k + 4
    L = BitMatrix(tuple((1 << (2 + j)) | (0b11 << (k + 2)) for j in range(k)), n)
    middle = ((1 << k) - 1) << 2
    S = BitMatrix((1 | middle | (1 << (k + 2)), 2 | middle | (1 << (k + 3))), n)
    return _pair(L, S, 2, name="hcode", k=k)


def reed_muller_first_order(m: int) -> BitMatrix:
    """Generator of RM(1, m) by the doubling recursion, starting from [11; 01]."""
    if m < 1:
        raise ValueError("m must be >= 1")
    g = BitMatrix.from_rows(["11", "01"])
    for _ in range(1, m):
        n = g.ncols
        top = hstack(g, g)
        g = vstack(top, BitMatrix((((1 << n) - 1) << n,), 2 * n))
    return g


def shortened_rm(m: int) -> BitMatrix:
    """Drop the all-ones row and the first column of RM(1, m)."""
    if m < 2:
        raise ValueError("m must be >= 2")
    g = reed_muller_first_order(m)
    return BitMatrix(tuple(r >> 1 for r in g.rows[1:]), g.ncols - 1)


def rm_code(m: int) -> CssCode:
    """[[2^m - 1, 1, 3]] with X-stabilizers S_m at level m - 1."""
    if m < 3:
        raise ValueError("m must be >= 3")
    S = shortened_rm(m)
    L = BitMatrix.ones(1, S.ncols)
    return build_css(_pair(L, S, m - 1, name="rm", m=m))


def bh_triorthogonal(k: int) -> BitMatrix:
    """The (k+3) x (3k+8) triorthogonal matrix: k logical rows, then three even rows.

    Column blocks: 4 | 4 | k | k | k.
    """
    if k < 2 or k % 2:
        raise ValueError("k must be even and >= 2")

    def row(a: str, b: str, c, d, e) -> str:
        return a + b + c + d + e

    ones, zeros = "1" * k, "0" * k
    rows = []
    for j in range(k):
        e = "".join("1" if i == j else "0" for i in range(k))
        rows.append(row("0000", "1111", e, e, e))
    rows.append(row("0011", "0011", ones, zeros, ones))
    rows.append(row("1010", "1010", zeros, ones, ones))
    rows.append(row("1111", "1111", zeros, zeros, zeros))
    return BitMatrix.from_rows(rows)


def rm_lift_permutation(n_inner: int) -> list[int]:
    """Maps a single-inner, single-output lift onto the S_{m+1} recursion layout.

    Target order: post-CZ half, output column, pre-CZ half.
    """
    return [1 + n_inner + i for i in range(n_inner)] + [0] + [1 + i for i in range(n_inner)]


def self_lift_rm_permutation(inner_perm: Sequence[int]) -> list[int]:
    """Permutation for the self-lift of a code that ``inner_perm`` maps onto RM order.

    The inner permutation is applied inside both halves before the usual
    :func:`rm_lift_permutation`, so repeated lifts of the Steane code can be
    compared with the shortened RM matrices at every level.
    """
    n = len(inner_perm)
    q = [0] + [1 + p for p in inner_perm] + [1 + n + p for p in inner_perm]
    return [q[r] for r in rm_lift_permutation(n)]


def hcode_lift_permutation(k: int) -> list[int]:
    """Maps the lift of hcode(k) onto the column blocks of :func:`bh_triorthogonal`."""
    w = k + 4
    pre = [k + c for c in range(w)]
    post = [k + w + c for c in range(w)]
    ident = list(range(2, k + 2))
    out = [post[0], post[1], pre[0], pre[1]]
    out += [post[k + 2], post[k + 3], pre[k + 2], pre[k + 3]]
    out += list(range(k))
    out += [post[c] for c in ident]
    out += [pre[c] for c in ident]
    return out


# stabilizer block of the hcode lift is [c_out; c_in]; add c_in row 0 into c_in row 1
HCODE_ROWOPS = ((1, 2),)


def apply_rowops(a: BitMatrix, rowops: Sequence[tuple[int, int]]) -> BitMatrix:
    """Each ``(src, dst)`` adds row src into row dst, in order."""
    rows = list(a.rows)
    for src, dst in rowops:
        if src == dst or not (0 <= src < len(rows) and 0 <= dst < len(rows)):
            raise ValueError(f"invalid row operation {(src, dst)}")
        rows[dst] ^= rows[src]
    return BitMatrix(tuple(rows), a.ncols)


def same_span(a: BitMatrix, b: BitMatrix) -> bool:
    if a.ncols != b.ncols:
        return False
    return rank(a) == rank(b) == rank(vstack(a, b))


def equivalence_witness(a_logical: BitMatrix, a_stab: BitMatrix, b_logical: BitMatrix,
                        b_stab: BitMatrix, perm: Sequence[int],
                        rowops: Sequence[tuple[int, int]] = ()) -> Verdict:
    """Check that permuting A's columns and applying stabilizer row operations matches B.

    Stabilizer spans must coincide and each logical row must agree with B's
    modulo that span. The detail records whether the match is entry-for-entry.
    """
    n = a_logical.ncols
    if sorted(perm) != list(range(n)):
        raise ValueError("perm is not a permutation of the columns")
    al = a_logical.permute_columns(perm)
    as_ = apply_rowops(a_stab.permute_columns(perm), rowops)
    if al.nrows != b_logical.nrows:
        return Verdict(False, "logical count", f"{al.nrows} logical rows vs {b_logical.nrows}")
    if not same_span(as_, b_stab):
        return Verdict(False, "stabilizer span", "stabilizer spans differ")
    basis = EchelonBasis(b_stab.rows)
    for i, (x, y) in enumerate(zip(al.rows, b_logical.rows)):
        if (x ^ y) not in basis:
            return Verdict(False, i, f"logical row {i} differs outside the stabilizer span")
    exact = al == b_logical and as_ == b_stab
    return Verdict(True, None, "exact match" if exact else "span match")


def random_self_orthogonal(n: int, r: int, rng: random.Random) -> Optional[BitMatrix]:
    """Random r independent even-weight, mutually orthogonal rows avoiding all-ones."""
    rows: list[int] = []
    ones = (1 << n) - 1
    basis = EchelonBasis()
    for _ in range(r):
        perp = nullspace(BitMatrix(tuple(rows), n)) if rows else BitMatrix.identity(n)
        for _attempt in range(64):
            v = 0
            for b in perp.rows:
                if rng.getrandbits(1):
                    v ^= b
            if v and v.bit_count() % 2 == 0 and v not in basis:
                trial = EchelonBasis(rows + [v])
                if ones not in trial:
                    rows.append(v)
                    basis.add(v)
                    break
        else:
            return None
    return BitMatrix(tuple(rows), n)


def random_weakly_selfdual(n: int, k: int, d: int, seed: int, attempts: int = 200) -> Optional[OrthoPair]:
    """Seeded search for a normal weakly self-dual code [[n, k, >= d]] with level-2 t."""
    if n > 30:
        raise ValueError("n must be <= 30")
    if d > n or k < 1 or k > n or (n - k) % 2:
        return None
    r = (n - k) // 2
    rng = random.Random(seed)
    for _ in range(attempts):
        S = random_self_orthogonal(n, r, rng)
        if S is None:
            continue
        perp = nullspace(S)
        basis = EchelonBasis(S.rows)
        cands = BitMatrix(tuple(v for v in perp.rows if basis.add(v)), n)
        L = normal_basis(S, cands)
        if L is None or L.nrows != k:
            continue
        pair = _pair(L, S, 2, name="random", seed=seed)
        dz = distance_z(build_css(pair), max(d, 1))
        if dz is not None and dz >= d:
            return pair
    return None


@dataclass(frozen=True)
class NamedFamily:
    name: str
    params: tuple[str, ...]
    generator: Callable


FAMILIES = {
    "steane": NamedFamily("steane", (), steane),
    "hcode": NamedFamily("hcode", ("k",), hcode),
    "rm": NamedFamily("rm", ("m",), lambda m: rm_code(m).pair),
    "bh-trio": NamedFamily("bh-trio", ("k",), bh_triorthogonal),
    "random": NamedFamily("random", ("n", "k", "d", "seed"), random_weakly_selfdual),
}

