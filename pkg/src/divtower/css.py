"""CSS codes built from an :class:`OrthoPair`, with brute-force distance checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .gf2 import BitMatrix, EchelonBasis, in_span, nullspace, rank
from .ortho import OrthoPair, Verdict, PASS, check_products, pair_report, weighted_sum

DEFAULT_DIM_CAP = 24
DEFAULT_W_MAX = 5


class InvariantError(ValueError):
    """A constructed object violates one of its defining invariants."""

    def __init__(self, name: str, verdict: Verdict):
        super().__init__(f"{name}: {verdict.detail}")
        self.name = name
        self.verdict = verdict


@dataclass(frozen=True)
class CssCode:
    """The code with X-stabilizers S, logicals L and Z-stabilizers ``[L;S]^perp``."""

    pair: OrthoPair
    zstab: BitMatrix
    k: int

    @property
    def n(self) -> int:
        return self.pair.n

    @property
    def nu(self) -> int:
        return self.pair.nu

    @property
    def L(self) -> BitMatrix:
        return self.pair.L

    @property
    def S(self) -> BitMatrix:
        return self.pair.S

    @property
    def t(self):
        return self.pair.t


def build_css(pair: OrthoPair) -> CssCode:
    for name, verdict in pair_report(pair):
        if not verdict:
            raise InvariantError(name, verdict)
    zstab = nullspace(pair.G)
    return CssCode(pair, zstab, sum(1 for r in pair.L.rows if r))


def normal_basis(S: BitMatrix, candidates: BitMatrix) -> Optional[BitMatrix]:
    """Orthonormal (mod 2) basis of ``span(candidates)`` modulo ``span(S)``.

    Returns None when the induced form has no orthonormal basis, i.e. it is
    alternating (the hyperbolic case) or degenerate.
    """
    if S.ncols != candidates.ncols:
        raise ValueError("S and candidates have different column counts")
    pre = check_products(BitMatrix((), S.ncols), S)
    if not pre:
        raise ValueError(f"S is not self-orthogonal: {pre.detail}")
    for i, c in enumerate(candidates.rows):
        for j, s in enumerate(S.rows):
            if (c & s).bit_count() & 1:
                raise ValueError(f"candidate {i} is not orthogonal to S[{j}]")

    def dot(a: int, b: int) -> int:
        return (a & b).bit_count() & 1

    basis = EchelonBasis(S.rows)
    work = [c for c in candidates.rows if basis.add(c)]
    done: list[int] = []
    while work:
        odd = next((i for i, w in enumerate(work) if dot(w, w)), None)
        if odd is not None:
            b = work.pop(odd)
            work = [w ^ b if dot(w, b) else w for w in work]
            done.append(b)
            continue
        # alternating remainder: split off a hyperbolic pair and merge it with a finished vector
        pair = next(((i, j) for i in range(len(work)) for j in range(i + 1, len(work))
                     if dot(work[i], work[j])), None)
        if pair is None or not done:
            return None
        c, cp = work[pair[0]], work[pair[1]]
        rest = [w for i, w in enumerate(work) if i not in pair]
        work = [w ^ (c if dot(w, cp) else 0) ^ (cp if dot(w, c) else 0) for w in rest]
        ell = done.pop()
        done.extend([ell ^ c, ell ^ cp, ell ^ c ^ cp])
    out = BitMatrix(tuple(done), S.ncols)
    assert check_products(out, S)
    return out


def _min_weight_escape(check: BitMatrix, logical: BitMatrix, w_max: int) -> Optional[tuple[int, int]]:
    """Smallest ``f`` with ``check f = 0`` and ``logical f != 0``, by support size.

    Returns ``(weight, f)`` with ``f`` lexicographically first among the
    lightest supports, or None if nothing up to ``w_max`` exists.
    """
    n = check.ncols
    nc = check.nrows
    cols = [0] * n
    for i, row in enumerate(check.rows):
        for j in range(n):
            if (row >> j) & 1:
                cols[j] |= 1 << i
    for i, row in enumerate(logical.rows):
        for j in range(n):
            if (row >> j) & 1:
                cols[j] |= 1 << (nc + i)
    low = (1 << nc) - 1

    def search(w: int, start: int, acc: int, chosen: int) -> Optional[int]:
        if w == 0:
            return chosen if (acc & low) == 0 and acc >> nc else None
        for j in range(start, n - w + 1):
            found = search(w - 1, j + 1, acc ^ cols[j], chosen | (1 << j))
            if found is not None:
                return found
        return None

    for w in range(1, min(w_max, n) + 1):
        f = search(w, 0, 0, 0)
        if f is not None:
            return w, f
    return None


def distance_z(code: CssCode, w_max: int = DEFAULT_W_MAX) -> Optional[int]:
    """Minimum weight of a vector orthogonal to S but not to L; None above ``w_max``."""
    if w_max < 1:
        raise ValueError("w_max must be >= 1")
    found = _min_weight_escape(code.S, code.L, w_max)
    return None if found is None else found[0]


def _span_cap(g: BitMatrix, dim_cap: int) -> int:
    r = rank(g)
    if r > dim_cap:
        raise ValueError(f"rank {r} exceeds dim_cap {dim_cap}")
    return r


def _codewords(L: BitMatrix, S: BitMatrix):
    """Yield ``(f, x)`` for all ``f = s + sum_a x_a L_a``, by Gray code over L and S rows."""
    gens = list(L.rows) + list(S.rows)
    k = L.nrows
    f, mask = 0, 0
    yield 0, 0
    for step in range(1, 1 << len(gens)):
        r = (step & -step).bit_length() - 1
        f ^= gens[r]
        mask ^= 1 << r
        yield f, mask & ((1 << k) - 1)


def distance_x(code: CssCode, dim_cap: int = DEFAULT_DIM_CAP) -> int:
    """Minimum weight over ``span([L;S])`` outside ``span(S)``."""
    _span_cap(code.pair.G, dim_cap)
    L = code.L.nonzero_rows()
    best = None
    for f, x in _codewords(L, code.S):
        if x:
            w = f.bit_count()
            if best is None or w < best:
                best = w
    if best is None:
        raise ValueError("code has no logical rows")
    return best


def verify_transversal_phase(code: CssCode, dim_cap: int = DEFAULT_DIM_CAP) -> Verdict:
    """Check ``sum_i f_i t_i = sum_a x_a (mod 2**nu)`` on every codeword."""
    _span_cap(code.pair.G, dim_cap)
    L = code.L.nonzero_rows()
    t = code.t.values
    mod = code.t.modulus
    for f, x in _codewords(L, code.S):
        lhs = weighted_sum(f, t) % mod
        rhs = x.bit_count() % mod
        if lhs != rhs:
            return Verdict(False, f, f"codeword with logical part {x:b} has phase {lhs}, expected {rhs} mod {mod}")
    return PASS


def has_transversal_x(code: CssCode) -> Verdict:
    """All-ones is in ``span([L;S])`` and L's total norm matches the total of t."""
    n = code.n
    ones = (1 << n) - 1
    if not in_span(code.pair.G, ones):
        return Verdict(False, "span", "all-ones vector is not in the span of [L;S]")
    total = 0
    for r in code.L.rows:
        total ^= r
    if not in_span(code.S, ones ^ total):
        return Verdict(False, "coset", "all-ones differs from the sum of L rows by a non-stabilizer")
    t = code.t
    lhs = sum(weighted_sum(r, t.values) for r in code.L.rows) % t.modulus
    rhs = sum(t.values) % t.modulus
    if lhs != rhs:
        return Verdict(False, "Ltt", f"sum of L norms {lhs} != sum of t {rhs} mod {t.modulus}")
    return PASS


def zstab_check(code: CssCode) -> Verdict:
    """Z-stabilizers are orthogonal to every row of L and S, with the expected count."""
    g = code.pair.G
    for i, z in enumerate(code.zstab.rows):
        if g.apply(z):
            return Verdict(False, i, f"Z-stabilizer {i} is not orthogonal to [L;S]")
    expected = code.n - rank(g)
    if code.zstab.nrows != expected:
        return Verdict(False, code.zstab.nrows, f"{code.zstab.nrows} Z-stabilizers, expected {expected}")
    return PASS
