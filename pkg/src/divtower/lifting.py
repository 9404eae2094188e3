"""Level lifting: from level-nu inner codes and an outer test pattern to a level-(nu+1) code.

Column layout of every lifted matrix: the ``n_out`` output columns first, then
for each inner code in input order its pre-CZ half followed by its post-CZ
half, each ``n_inner`` wide.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .css import CssCode, InvariantError, _min_weight_escape, build_css
from .gf2 import BitMatrix, BitVector, as_bits, hstack, in_span, vstack
from .modring import lift_solution
from .ortho import (
    CoeffVector,
    DependentRowsError,
    OrthoPair,
    PASS,
    Verdict,
    is_nu_null,
    is_nu_orthogonal,
    is_nu_orthonormal,
    pair_report,
    weighted_sum,
)

SENSITIVITY_CAP = 10**8


@dataclass(frozen=True)
class InnerCodeSpec:
    """An inner code whose L has one row per output qubit (zero rows allowed)."""

    L: BitMatrix
    S: BitMatrix
    t: CoeffVector

    @property
    def n_out(self) -> int:
        return self.L.nrows

    @property
    def n_inner(self) -> int:
        return self.L.ncols

    @property
    def nu(self) -> int:
        return self.t.nu

    @classmethod
    def from_pair(cls, pair: OrthoPair, positions: Optional[Sequence[int]] = None,
                  n_out: Optional[int] = None) -> "InnerCodeSpec":
        """Place the logical rows of ``pair`` at ``positions`` among ``n_out`` outputs."""
        k = pair.L.nrows
        if positions is None:
            positions = range(k)
        positions = list(positions)
        if n_out is None:
            n_out = k
        if len(positions) != k or len(set(positions)) != k or not all(0 <= p < n_out for p in positions):
            raise ValueError("positions must be k distinct output indices")
        rows = [0] * n_out
        for p, r in zip(positions, pair.L.rows):
            rows[p] = r
        return cls(BitMatrix(tuple(rows), pair.n), pair.S, pair.t)


def inner_report(inner: InnerCodeSpec) -> list[tuple[str, Verdict]]:
    out = pair_report(OrthoPair(inner.L, inner.S, inner.t))
    t = inner.t
    lhs = sum(weighted_sum(r, t.values) for r in inner.L.rows) % t.modulus
    rhs = sum(t.values) % t.modulus
    ltt = PASS if lhs == rhs else Verdict(False, (lhs, rhs), f"sum of L norms {lhs} != sum of t {rhs} mod {t.modulus}")
    out.append(("L norms sum to sum of t", ltt))
    return out


def validate_inners(inners: Sequence[InnerCodeSpec]) -> None:
    if not inners:
        return
    n_out, nu = inners[0].n_out, inners[0].nu
    for a, inner in enumerate(inners):
        if inner.n_out != n_out:
            raise ValueError(f"inner {a} has {inner.n_out} L rows, expected n_out = {n_out}")
        if inner.nu != nu:
            raise ValueError(f"inner {a} is at level {inner.nu}, inner 0 at level {nu}")
        if inner.n_inner == 0:
            raise ValueError(f"inner {a} has no qubits")
        for name, verdict in inner_report(inner):
            if not verdict:
                raise InvariantError(f"inner {a}: {name}", verdict)


def derive_m(inners: Sequence[InnerCodeSpec]) -> BitMatrix:
    """Outer matrix: entry ``(a, k)`` is 1 iff row k of the a-th inner L is nonzero."""
    if not inners:
        return BitMatrix((), 0)
    n_out = inners[0].n_out
    rows = []
    for a, inner in enumerate(inners):
        if inner.n_out != n_out:
            raise ValueError(f"inner {a} has {inner.n_out} L rows, expected {n_out}")
        rows.append(sum(1 << k for k, r in enumerate(inner.L.rows) if r))
    return BitMatrix(tuple(rows), n_out)


def _doubled(a: BitMatrix) -> BitMatrix:
    """``(11) (x) A``: the matrix repeated in both halves."""
    return hstack(a, a)


def _blocks(inners: Sequence[InnerCodeSpec], n_out: int) -> tuple[BitMatrix, BitMatrix, BitMatrix]:
    m = derive_m(inners)
    nc = len(inners)
    widths = [2 * inner.n_inner for inner in inners]

    c_ell = hstack(BitMatrix.identity(n_out), *[_doubled(inner.L) for inner in inners], nrows=n_out)

    out_rows = []
    for a in range(nc):
        ma = m.select_rows([a])
        parts = [ma]
        for b in range(nc):
            if b < a:
                parts.append(_doubled(ma @ inners[b].L))
            elif b == a:
                half = inners[a].n_inner
                parts.append(BitMatrix(((1 << half) - 1,), widths[a]))
            else:
                parts.append(BitMatrix.zeros(1, widths[b]))
        out_rows.append(hstack(*parts))
    total = n_out + sum(widths)
    c_out = vstack(*out_rows, ncols=total)

    in_rows = []
    for a, inner in enumerate(inners):
        parts = [BitMatrix.zeros(inner.S.nrows, n_out)]
        for b in range(nc):
            if b == a:
                parts.append(_doubled(inner.S))
            else:
                parts.append(BitMatrix.zeros(inner.S.nrows, widths[b]))
        in_rows.append(hstack(*parts))
    c_in = vstack(*in_rows, ncols=total)
    return c_ell, c_out, c_in


def structural_t(inners: Sequence[InnerCodeSpec], n_out: int) -> list[int]:
    """``[1 ... 1 | -t1 t1 | -t2 t2 | ...]`` modulo ``2**(nu+1)``."""
    if not inners:
        return [1] * n_out
    mod = 1 << (inners[0].nu + 1)
    out = [1] * n_out
    for inner in inners:
        out.extend((mod - x) % mod for x in inner.t.values)
        out.extend(inner.t.values)
    return out


@dataclass(frozen=True)
class LiftResult:
    c_ell: BitMatrix
    c_out: BitMatrix
    c_in: BitMatrix
    t_lift: CoeffVector
    n_out: int
    widths: tuple[int, ...]
    t_structural: tuple[int, ...]
    bumped: tuple[int, ...]
    sum_constraint_used: bool
    notes: tuple[str, ...] = field(default=(), compare=False)

    @property
    def ncols(self) -> int:
        return self.c_ell.ncols

    @property
    def nu(self) -> int:
        return self.t_lift.nu

    @property
    def stacked(self) -> BitMatrix:
        return vstack(self.c_ell, self.c_out, self.c_in)

    @property
    def stabilizers(self) -> BitMatrix:
        return vstack(self.c_out, self.c_in)

    def pair(self) -> OrthoPair:
        return OrthoPair(self.c_ell, self.stabilizers, self.t_lift)

    def code(self) -> CssCode:
        return build_css(self.pair())

    def check_matrices(self) -> tuple[BitMatrix, BitMatrix]:
        return self.stabilizers, self.c_ell


def lift_report(res: LiftResult) -> list[tuple[str, Verdict]]:
    """Every conclusion of the lifting construction, re-evaluated from scratch."""
    t = res.t_lift
    out = []
    expected = res.n_out + sum(res.widths)
    out.append(("column count", PASS if res.ncols == expected == len(t)
                else Verdict(False, res.ncols, f"{res.ncols} columns, expected {expected}")))
    out.append(("c_ell orthonormal", is_nu_orthonormal(res.c_ell, t)))
    out.append(("c_out null", is_nu_null(res.c_out, t)))
    out.append(("c_in null", is_nu_null(res.c_in, t)))
    try:
        orth = is_nu_orthogonal(res.stacked, t)
    except DependentRowsError as err:
        orth = Verdict(False, err.rows, str(err))
    out.append(("stack orthogonal", orth))
    lhs = sum(weighted_sum(r, t.values) for r in res.c_ell.rows) % t.modulus
    rhs = sum(t.values) % t.modulus
    out.append(("c_ell norms sum to sum of t", PASS if lhs == rhs
                else Verdict(False, (lhs, rhs), f"{lhs} != {rhs} mod {t.modulus}")))
    return out


def naive_adjustment(inners: Sequence[InnerCodeSpec]) -> Verdict:
    """Correct the structural vector using c_out alone and report whether c_ell stays orthonormal."""
    if not inners:
        return PASS
    n_out = inners[0].n_out
    nu = inners[0].nu
    c_ell, c_out, _ = _blocks(inners, n_out)
    base = structural_t(inners, n_out)
    t = lift_solution(c_out, [0] * c_out.nrows, base, nu + 1)
    return is_nu_orthonormal(c_ell, CoeffVector(tuple(t), nu + 1))


def assemble_lift(inners: Sequence[InnerCodeSpec], n_out: Optional[int] = None) -> LiftResult:
    """Build the lifted blocks and a level-(nu+1) coefficient vector, then verify everything.

    The structural vector already gives every row the right norm modulo
    ``2**nu``. The correction adds ``2**nu`` on a set of columns found by
    lifting the full norm system (all rows of the stack, plus the all-ones
    row when independent so the total of t is preserved).
    """
    validate_inners(inners)
    if inners:
        n_out = inners[0].n_out
        nu = inners[0].nu
    elif n_out is None:
        n_out = 0
    if not inners:
        # no routines: outputs pass unchecked at the base level
        t = CoeffVector((1,) * n_out, 2)
        return LiftResult(BitMatrix.identity(n_out), BitMatrix((), n_out), BitMatrix((), n_out),
                          t, n_out, (), tuple(t.values), (), False)
    c_ell, c_out, c_in = _blocks(inners, n_out)
    stack = vstack(c_ell, c_out, c_in)
    base = structural_t(inners, n_out)
    n_t = stack.ncols
    mod = 1 << (nu + 1)
    targets = [1] * c_ell.nrows + [0] * (c_out.nrows + c_in.nrows)
    ones = (1 << n_t) - 1
    notes = []
    use_sum = not in_span(stack, ones)
    if use_sum:
        system = vstack(stack, BitMatrix((ones,), n_t))
        targets = targets + [sum(base) % mod]
    else:
        system = stack
        notes.append("all-ones lies in the row span; the total of t is fixed by the norm equations")
    try:
        t = lift_solution(system, targets, [x % (mod >> 1) for x in base], nu + 1)
    except ValueError as err:
        raise InvariantError("coefficient adjustment", Verdict(False, None, str(err))) from err
    bumped = tuple(j for j in range(n_t) if t[j] != base[j])
    naive = naive_adjustment(inners)
    notes.append("c_out-only correction keeps c_ell orthonormal" if naive
                 else f"c_out-only correction breaks c_ell orthonormality ({naive.detail})")
    res = LiftResult(c_ell, c_out, c_in, CoeffVector(tuple(t), nu + 1), n_out,
                     tuple(2 * inner.n_inner for inner in inners), tuple(base), bumped, use_sum,
                     tuple(notes))
    for name, verdict in lift_report(res):
        if not verdict:
            raise InvariantError(f"lift {name}", verdict)
    return res


def complete_check_matrix(inners: Sequence[InnerCodeSpec], n_out: int = 0) -> tuple[BitMatrix, BitMatrix]:
    """Return (C0, C1): all syndrome rows, and the propagated-error map to the outputs."""
    validate_inners(inners)
    if not inners:
        return BitMatrix((), n_out), BitMatrix.identity(n_out)
    c_ell, c_out, c_in = _blocks(inners, inners[0].n_out)
    return vstack(c_out, c_in), c_ell


class ErrorClass(str, Enum):
    REJECTED = "rejected"
    ACCEPTED_CLEAN = "accepted_clean"
    ACCEPTED_FAULTY = "accepted_faulty"


def classify_error(c0: BitMatrix, c1: BitMatrix, y: BitVector) -> ErrorClass:
    if c0.ncols != c1.ncols:
        raise ValueError("C0 and C1 have different column counts")
    y = as_bits(y, c0.ncols)
    if c0.apply(y):
        return ErrorClass.REJECTED
    if c1.apply(y):
        return ErrorClass.ACCEPTED_FAULTY
    return ErrorClass.ACCEPTED_CLEAN


def undetected_min_weight(c0: BitMatrix, c1: BitMatrix, w_max: int) -> Optional[int]:
    """Lightest error that passes every check yet corrupts an output."""
    found = _min_weight_escape(c0, c1, w_max)
    return None if found is None else found[0]


def check_sensitivity(m: BitMatrix, d: int, cap: int = SENSITIVITY_CAP) -> Verdict:
    """``|e| + 2|Me| >= d`` for every nonzero e, checked over ``|e| <= d - 1``.

    The witness is the first violating e in weight-then-lexicographic order.
    """
    n = m.ncols
    top = min(d - 1, n)
    cost = sum(comb(n, w) for w in range(1, top + 1))
    if cost > cap:
        raise ValueError(f"{cost} patterns exceed the enumeration cap {cap}")
    cols = list(m.T.rows) if m.nrows else [0] * n

    def search(w: int, start: int, syn: int, chosen: int, weight: int) -> Optional[int]:
        if w == 0:
            return chosen if weight + 2 * syn.bit_count() < d else None
        for j in range(start, n - w + 1):
            found = search(w - 1, j + 1, syn ^ cols[j], chosen | (1 << j), weight)
            if found is not None:
                return found
        return None

    for top_w in range(1, top + 1):
        e = search(top_w, 0, 0, 0, top_w)
        if e is not None:
            value = top_w + 2 * m.apply(e).bit_count()
            return Verdict(False, e, f"e with support {[j for j in range(n) if (e >> j) & 1]}: {value} < {d}")
    return PASS


def tower_rate(n_mu: int, k_mu: int, s: int, mu: int, nu: int) -> Fraction:
    """Closed-form ``n/k`` after lifting from level mu to level nu."""
    if not (nu >= mu >= 2):
        raise ValueError("need nu >= mu >= 2")
    if s < 2:
        raise ValueError("need s >= 2")
    if n_mu < 1 or k_mu < 1:
        raise ValueError("n and k must be positive")
    c = Fraction(1, 2 * s - 1)
    return (2 * s) ** (nu - mu) * (Fraction(n_mu, k_mu) + c) - c


def rate_step(ratio: Fraction, s: int) -> Fraction:
    """One lift: ``n' = k' + 2 n n_c`` with ``k' s = k n_c``."""
    return 2 * s * Fraction(ratio) + 1
