from dataclasses import replace
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from divtower.catalog import hcode, random_weakly_selfdual, steane
from divtower.css import InvariantError, distance_z
from divtower.gf2 import BitMatrix
from divtower.lifting import (
    ErrorClass,
    InnerCodeSpec,
    assemble_lift,
    check_sensitivity,
    classify_error,
    complete_check_matrix,
    derive_m,
    lift_report,
    naive_adjustment,
    rate_step,
    structural_t,
    tower_rate,
    undetected_min_weight,
)
from divtower.ortho import CoeffVector, OrthoPair, additivity_oracle


def steane3():
    p = steane()
    return OrthoPair(p.L, p.S, CoeffVector((3,) * 7, 2))


def all_pass(report):
    return all(v for _, v in report)


def test_derive_m_examples():
    assert derive_m([InnerCodeSpec.from_pair(steane())]).to_strings() == ["1"]
    assert derive_m([InnerCodeSpec.from_pair(hcode(4))]).to_strings() == ["1111"]
    spec = InnerCodeSpec.from_pair(steane(), positions=[2], n_out=3)
    assert derive_m([spec]).to_strings() == ["001"]
    assert derive_m([]).shape == (0, 0)


def test_from_pair_positions_validated():
    with pytest.raises(ValueError):
        InnerCodeSpec.from_pair(hcode(2), positions=[0, 0], n_out=2)
    with pytest.raises(ValueError):
        InnerCodeSpec.from_pair(steane(), positions=[3], n_out=2)


def test_steane_lift_blocks():
    inner = InnerCodeSpec.from_pair(steane3())
    res = assemble_lift([inner])
    ones7 = "1" * 7
    assert res.c_ell.to_strings() == ["1" + ones7 + ones7]
    assert res.c_out.to_strings() == ["1" + ones7 + "0" * 7]
    assert res.c_in.to_strings() == ["0" + r + r for r in steane().S.to_strings()]
    assert structural_t([inner], 1) == [1] + [5] * 7 + [3] * 7
    assert res.t_structural == tuple([1] + [5] * 7 + [3] * 7)
    assert res.ncols == 15 and res.nu == 3
    assert all_pass(lift_report(res))
    # an independently derived valid vector also passes every conclusion
    example = CoeffVector((1, 1, 5, 5, 5, 5, 5, 5, 7, 3, 3, 3, 3, 3, 3), 3)
    assert all_pass(lift_report(replace(res, t_lift=example)))


def test_adjustment_only_bumps_by_half_modulus():
    res = assemble_lift([InnerCodeSpec.from_pair(hcode(4))])
    for j, (a, b) in enumerate(zip(res.t_structural, res.t_lift.values)):
        assert (a - b) % 8 in (0, 4)
        assert (j in res.bumped) == (a % 8 != b)


def test_naive_adjustment_conflict_is_recorded():
    inner = InnerCodeSpec.from_pair(steane3())
    assert not naive_adjustment([inner])
    res = assemble_lift([inner])
    assert any("c_out-only" in n for n in res.notes)


def test_lift_rejects_mixed_inputs():
    a = InnerCodeSpec.from_pair(steane())
    b = InnerCodeSpec.from_pair(assemble_lift([a]).pair())
    with pytest.raises(ValueError, match="level"):
        assemble_lift([a, b])
    with pytest.raises(ValueError, match="L rows"):
        assemble_lift([a, InnerCodeSpec.from_pair(hcode(2))])
    p = steane()
    with pytest.raises(InvariantError):
        assemble_lift([InnerCodeSpec(p.L, p.S, CoeffVector.ones(7, 2))])


def test_multi_inner_lift():
    n_out = 2
    inners = [
        InnerCodeSpec.from_pair(steane(), [0], n_out),
        InnerCodeSpec.from_pair(steane(), [1], n_out),
        InnerCodeSpec.from_pair(hcode(2), [0, 1], n_out),
    ]
    res = assemble_lift(inners)
    assert res.widths == (14, 14, 12)
    assert res.ncols == 2 + 40
    assert derive_m(inners).to_strings() == ["10", "01", "11"]
    assert all_pass(lift_report(res))
    code = res.code()
    assert code.k == 2
    assert distance_z(code) == undetected_min_weight(*res.check_matrices(), 5)


def test_double_lift():
    r1 = assemble_lift([InnerCodeSpec.from_pair(steane())])
    r2 = assemble_lift([InnerCodeSpec.from_pair(r1.pair())])
    assert r2.ncols == 31 and r2.nu == 4
    assert undetected_min_weight(*r2.check_matrices(), 5) == 3


def test_complete_check_matrix_shapes():
    c0, c1 = complete_check_matrix([InnerCodeSpec.from_pair(steane())])
    assert c0.shape == (4, 15) and c1.shape == (1, 15)
    c0, c1 = complete_check_matrix([InnerCodeSpec.from_pair(hcode(2))])
    assert c0.shape == (3, 14) and c1.shape == (2, 14)
    c0, c1 = complete_check_matrix([], n_out=3)
    assert c0.shape == (0, 3) and c1 == BitMatrix.identity(3)


def test_classify_examples():
    c0, c1 = complete_check_matrix([InnerCodeSpec.from_pair(steane())])
    assert classify_error(c0, c1, 0) == ErrorClass.ACCEPTED_CLEAN
    assert classify_error(c0, c1, 1) == ErrorClass.REJECTED
    assert undetected_min_weight(c0, c1, 5) == 3
    found = [sum(1 << j for j in sub) for sub in combinations(range(15), 3)
             if classify_error(c0, c1, sum(1 << j for j in sub)) == ErrorClass.ACCEPTED_FAULTY]
    assert found
    assert classify_error(c0, c1, found[0]) == ErrorClass.ACCEPTED_FAULTY


def test_undetected_weight_matches_exhaustive_classification():
    for pair in (steane(), hcode(2)):
        c0, c1 = complete_check_matrix([InnerCodeSpec.from_pair(pair)])
        n = c0.ncols
        expect = None
        for w in range(1, 4):
            if any(classify_error(c0, c1, sum(1 << j for j in sub)) == ErrorClass.ACCEPTED_FAULTY
                   for sub in combinations(range(n), w)):
                expect = w
                break
        assert undetected_min_weight(c0, c1, 3) == expect


def line(n):
    return BitMatrix.from_rows(["0" * i + "11" + "0" * (n - i - 2) for i in range(n - 1)])


def ring(n):
    rows = line(n).rows + ((1 | (1 << (n - 1))),)
    return BitMatrix(rows, n)


def brute_sensitivity(m, d):
    n = m.ncols
    for e in range(1, 1 << n):
        if e.bit_count() + 2 * m.apply(e).bit_count() < d:
            return False
    return True


def test_sensitivity_examples():
    assert check_sensitivity(BitMatrix.from_rows(["1"]), 3)
    v = check_sensitivity(line(4), 4)
    assert not v and v.witness == 1
    assert check_sensitivity(ring(4), 4)
    # on four bits the all-ones error has zero syndrome, so d = 5 fails even on a ring
    v = check_sensitivity(ring(4), 5)
    assert not v and v.witness == 0b1111
    v = check_sensitivity(line(5), 5)
    assert not v and v.witness == 1
    assert check_sensitivity(ring(5), 5)
    with pytest.raises(ValueError, match="cap"):
        check_sensitivity(BitMatrix.zeros(1, 40), 10)


@given(st.integers(1, 4), st.integers(1, 7), st.integers(1, 8), st.data())
def test_sensitivity_matches_exhaustive(r, n, d, data):
    rows = data.draw(st.lists(st.integers(0, (1 << n) - 1), min_size=r, max_size=r))
    m = BitMatrix(tuple(rows), n)
    assert bool(check_sensitivity(m, d)) == brute_sensitivity(m, d)


def test_rate_examples():
    assert tower_rate(7, 1, 2, 2, 2) == 7
    assert tower_rate(7, 1, 2, 2, 3) == 29
    assert tower_rate(7, 1, 2, 2, 4) == 117
    assert rate_step(rate_step(Fraction(7), 2), 2) == 117
    for bad in [(7, 1, 1, 2, 3), (7, 1, 2, 3, 2), (7, 1, 2, 1, 2), (0, 1, 2, 2, 3)]:
        with pytest.raises(ValueError):
            tower_rate(*bad)


@given(st.integers(1, 50), st.integers(1, 10), st.integers(2, 6), st.integers(2, 4), st.integers(0, 4))
def test_rate_closed_form_matches_iteration(n, k, s, mu, steps):
    r = Fraction(n, k)
    for _ in range(steps):
        r = rate_step(r, s)
    assert tower_rate(n, k, s, mu, mu + steps) == r


@st.composite
def inner_sets(draw):
    n_out = draw(st.integers(1, 3))
    count = draw(st.integers(1, 3))
    inners = []
    for _ in range(count):
        n = draw(st.sampled_from([5, 6, 7, 8]))
        k = draw(st.integers(1, min(n_out, 2)))
        if (n - k) % 2:
            n += 1
        pair = random_weakly_selfdual(n, k, 1, draw(st.integers(0, 10_000)), attempts=20)
        if pair is None:
            continue
        pos = draw(st.permutations(range(n_out)))[:k]
        inners.append(InnerCodeSpec.from_pair(pair, pos, n_out))
    return inners


@given(inner_sets())
def test_random_lifts_satisfy_every_conclusion(inners):
    if not inners:
        return
    res = assemble_lift(inners)
    assert all_pass(lift_report(res))
    assert res.ncols == res.n_out + sum(2 * i.n_inner for i in inners)
    stack = res.stacked.nonzero_rows()
    if stack.nrows <= 10:
        assert additivity_oracle(stack, res.t_lift)
