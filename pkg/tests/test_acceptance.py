"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]``/``[FAIL]`` line with the measured runtime
against its bound. Run ``pytest tests/test_acceptance.py -v`` to see them.
"""

import random
import time
from fractions import Fraction
from itertools import combinations

import pytest

from divtower.catalog import (
    HCODE_ROWOPS,
    bh_triorthogonal,
    equivalence_witness,
    hcode,
    hcode_lift_permutation,
    random_weakly_selfdual,
    rm_code,
    rm_lift_permutation,
    self_lift_rm_permutation,
    shortened_rm,
    steane,
)
from divtower.css import build_css, distance_x, distance_z, has_transversal_x
from divtower.gf2 import BitMatrix, dependent_rows
from divtower.lifting import (
    InnerCodeSpec,
    assemble_lift,
    check_sensitivity,
    complete_check_matrix,
    lift_report,
    rate_step,
    tower_rate,
    undetected_min_weight,
)
from divtower.modring import CongruenceSystem, lift_solution, solve_mod2k
from divtower.ortho import (
    CoeffVector,
    additivity_oracle,
    disjoint_span_oracle,
    is_nu_orthogonal,
    is_triorthogonal,
)


@pytest.fixture
def emit(capsys):
    def _emit(number, title, ok, elapsed, limit, detail=""):
        tag = "PASS" if ok and elapsed < limit else "FAIL"
        line = f"[{tag}] criterion {number}: {title} ({elapsed:.3f} s, limit {limit} s)"
        if detail:
            line += f" {detail}"
        with capsys.disabled():
            print("\n" + line)
        assert ok, detail
        assert elapsed < limit, f"took {elapsed:.3f} s"
    return _emit


def all_pass(report):
    return all(v for _, v in report)


def test_criterion_1_steane_to_15(emit):
    t0 = time.perf_counter()
    res = assemble_lift([InnerCodeSpec.from_pair(steane())])
    code = res.code()
    same = equivalence_witness(res.c_ell, res.stabilizers, BitMatrix.ones(1, 15), shortened_rm(4),
                               rm_lift_permutation(7))
    dz = distance_z(code)
    und = undetected_min_weight(*res.check_matrices(), 5)
    orth = is_nu_orthogonal(res.stacked, res.t_lift)
    elapsed = time.perf_counter() - t0
    ok = res.ncols == 15 and res.nu == 3 and bool(same) and dz == und == 3 and bool(orth) \
        and all_pass(lift_report(res))
    emit(1, "Steane -> [[15,1,3]]", ok, elapsed, 1,
         f"n={res.ncols} nu={res.nu} span={same.detail} d_Z={dz} undetected={und}")


def test_criterion_2_tower_to_level_4(emit):
    t0 = time.perf_counter()
    pair, perm = steane(), list(range(7))
    rows = []
    ok = True
    tx = [bool(has_transversal_x(build_css(pair)))]
    for m in (4, 5):
        res = assemble_lift([InnerCodeSpec.from_pair(pair)])
        perm = self_lift_rm_permutation(perm)
        pair = res.pair()
        code = build_css(pair)
        same = equivalence_witness(res.c_ell, res.stabilizers, BitMatrix.ones(1, res.ncols),
                                   shortened_rm(m), perm)
        dz = distance_z(code)
        ok &= bool(same) and dz == 3 and bool(is_nu_orthogonal(res.stacked, res.t_lift))
        tx.append(bool(has_transversal_x(code)))
        rows.append((res.ncols, res.nu, dz))
    elapsed = time.perf_counter() - t0
    ok &= rows[-1][:2] == (31, 4) and all(tx)
    emit(2, "tower to level 4", ok, elapsed, 10, f"levels (n, nu, d_Z) {rows}, transversal X {tx}")


def test_criterion_3_hcode_to_triorthogonal(emit):
    t0 = time.perf_counter()
    ok = True
    parts = []
    for k in (2, 4, 6):
        res = assemble_lift([InnerCodeSpec.from_pair(hcode(k))])
        code = res.code()
        dz = distance_z(code)
        tri = is_triorthogonal(res.stacked)
        orth = is_nu_orthogonal(res.stacked, res.t_lift)
        target = bh_triorthogonal(k)
        eq = equivalence_witness(res.c_ell, res.stabilizers, target.select_rows(range(k)),
                                 target.select_rows(range(k, k + 3)), hcode_lift_permutation(k),
                                 HCODE_ROWOPS)
        good = res.ncols == 3 * k + 8 and dz == 2 and bool(tri) and bool(orth) and res.nu == 3
        if k == 2:
            good &= eq.ok and eq.detail == "exact match"
        ok &= good
        parts.append(f"k={k}: n={res.ncols} d_Z={dz} {eq.detail}")
    elapsed = time.perf_counter() - t0
    emit(3, "H-code -> [[3k+8,k,2]] triorthogonal", ok, elapsed, 5, "; ".join(parts))


def _orthogonal_t(a: BitMatrix, nu: int, rng: random.Random):
    """An odd t making ``a`` nu-orthogonal, or None."""
    A, v = [], []
    for size in range(2, min(nu, a.nrows) + 1):
        for sub in combinations(range(a.nrows), size):
            acc = (1 << a.ncols) - 1
            for r in sub:
                acc &= a.rows[r]
            if acc:
                A.append([(1 << (size - 1)) * ((acc >> j) & 1) for j in range(a.ncols)])
                v.append(0)
    seed = [1 + 2 * rng.randrange(1 << (nu - 1)) for _ in range(a.ncols)]
    if not A:
        return CoeffVector(tuple(seed), nu)
    x = solve_mod2k(CongruenceSystem.build(A, v, nu, a.ncols), seed=[1] * a.ncols, seed_nu=1)
    return None if x is None else CoeffVector(tuple(x), nu)


def test_criterion_4_orthogonality_conditions(emit):
    rng = random.Random(4)
    t0 = time.perf_counter()
    agree = total = trues = 0
    while total < 1000:
        n = rng.randint(1, 10)
        r = rng.randint(1, 4)
        a = BitMatrix(tuple(rng.getrandbits(n) for _ in range(r)), n)
        if dependent_rows(a.nonzero_rows()) is not None:
            continue
        nu = rng.choice([2, 3, 4])
        t = _orthogonal_t(a, nu, rng) if total % 2 else None
        if t is None:
            t = CoeffVector(tuple(1 + 2 * rng.randrange(8) for _ in range(n)), nu)
        subset = bool(is_nu_orthogonal(a, t))
        additive = bool(additivity_oracle(a, t))
        disjoint = bool(disjoint_span_oracle(a, t))
        total += 1
        trues += subset
        agree += subset == additive == disjoint
    elapsed = time.perf_counter() - t0
    emit(4, "subset, additivity and disjoint-span conditions agree", agree == total and 0 < trues < total,
         elapsed, 30, f"{agree}/{total} agree, {trues} orthogonal")


def test_criterion_5_lift_solution(emit):
    rng = random.Random(5)
    t0 = time.perf_counter()
    good = total = 0
    while total < 1000:
        n = rng.randint(1, 10)
        r = rng.randint(0, min(n, 5))
        a = BitMatrix(tuple(rng.getrandbits(n) for _ in range(r)), n)
        if dependent_rows(a) is not None:
            continue
        nu = rng.randint(2, 8)
        half, mod = 1 << (nu - 1), 1 << nu
        u = [rng.randrange(half) for _ in range(n)]
        v = [(sum(u[j] for j in range(n) if (row >> j) & 1) + half * rng.getrandbits(1)) % mod
             for row in a.rows]
        out = lift_solution(a, v, u, nu)
        eq = all(sum(out[j] for j in range(n) if (row >> j) & 1) % mod == vi for row, vi in zip(a.rows, v))
        low = all((x - y) % half == 0 for x, y in zip(out, u))
        good += eq and low
        total += 1
    elapsed = time.perf_counter() - t0
    emit(5, "congruence lifting", good == total, elapsed, 5, f"{good}/{total} exact")


def test_criterion_6_random_lifts(emit):
    rng = random.Random(6)
    t0 = time.perf_counter()
    lifts = failures = 0
    seed = 0
    while lifts < 100:
        n_out = rng.randint(1, 3)
        inners = []
        for _ in range(rng.randint(1, 3)):
            k = rng.randint(1, min(n_out, 2))
            n = rng.randint(5, 12)
            if (n - k) % 2:
                n -= 1
            seed += 1
            pair = random_weakly_selfdual(n, k, 1, seed, attempts=20)
            if pair is None:
                continue
            pos = rng.sample(range(n_out), k)
            inners.append(InnerCodeSpec.from_pair(pair, pos, n_out))
        if not inners:
            continue
        res = assemble_lift(inners)
        ok = all_pass(lift_report(res))
        ok &= res.ncols == n_out + sum(2 * i.n_inner for i in inners)
        ok &= res.nu == 3
        failures += not ok
        lifts += 1
    elapsed = time.perf_counter() - t0
    emit(6, "lifting conclusions on random inners", failures == 0, elapsed, 60,
         f"{lifts} lifts, {failures} failures")


def test_criterion_7_check_matrix_consistency(emit):
    t0 = time.perf_counter()
    parts = []
    ok = True
    for name, pair in (("steane", steane()), ("hcode2", hcode(2))):
        inners = [InnerCodeSpec.from_pair(pair)]
        c0, c1 = complete_check_matrix(inners)
        und = undetected_min_weight(c0, c1, 5)
        dz = distance_z(assemble_lift(inners).code())
        ok &= und == dz is not None
        parts.append(f"{name}: undetected={und} d_Z={dz}")
    elapsed = time.perf_counter() - t0
    emit(7, "undetected weight equals d_Z", ok, elapsed, 5, "; ".join(parts))


def test_criterion_8_dx_at_least_dz(emit):
    t0 = time.perf_counter()
    codes = [build_css(steane())]
    codes += [build_css(hcode(k)) for k in (2, 4, 6)]
    codes += [rm_code(m) for m in (3, 4, 5)]
    codes += [assemble_lift([InnerCodeSpec.from_pair(hcode(k))]).code() for k in (2, 4)]
    n_catalog = len(codes)
    rng = random.Random(8)
    seed = 0
    while len(codes) < n_catalog + 50:
        n = rng.randint(6, 12)
        k = rng.choice([x for x in (1, 2, 3, 4) if (n - x) % 2 == 0])
        seed += 1
        pair = random_weakly_selfdual(n, k, 1, seed, attempts=20)
        if pair is not None:
            codes.append(build_css(pair))
    bad = [(c.n, c.k) for c in codes if distance_x(c) < distance_z(c, c.n)]
    elapsed = time.perf_counter() - t0
    emit(8, "d_X >= d_Z", not bad, elapsed, 30,
         f"{n_catalog} catalog + {len(codes) - n_catalog} random codes, violations {bad}")


def test_criterion_9_rate_formula(emit):
    t0 = time.perf_counter()
    ident = tower_rate(7, 1, 2, 2, 2) == Fraction(7) and tower_rate(15, 4, 3, 3, 3) == Fraction(15, 4)
    stepped = rate_step(rate_step(Fraction(7, 1), 2), 2)
    closed = tower_rate(7, 1, 2, 2, 4)
    elapsed = time.perf_counter() - t0
    emit(9, "rate recursion", ident and stepped == closed == 117, elapsed, 1,
         f"two steps {stepped}, closed form {closed}")


def test_criterion_10_sensitivity(emit):
    t0 = time.perf_counter()
    line = BitMatrix.from_rows(["11000", "01100", "00110", "00011"])
    ring = BitMatrix.from_rows(["11000", "01100", "00110", "00011", "10001"])
    v_line = check_sensitivity(line, 5)
    v_ring = check_sensitivity(ring, 5)
    elapsed = time.perf_counter() - t0
    endpoint = v_line.witness in (1 << 0, 1 << 4)
    emit(10, "open line fails, ring passes at d = 5", not v_line and endpoint and bool(v_ring), elapsed, 1,
         f"line witness {v_line.detail!r}, ring {v_ring.ok}")
