import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from bentforge.carry import (PeriodicBitSeq, carry_sum_identity, closing_carries, paired_systems,
                             satisfies_recurrence, solve_carries, u_value, uniqueness_probe,
                             weight_identity_check)
from bentforge.errors import DomainError
from bentforge.expsums import string_inequality_oracle


@st.composite
def instances(draw):
    n = draw(st.integers(2, 16))
    r = draw(st.integers(1, 3))
    coeffs = draw(st.lists(st.sampled_from([-3, -2, -1, 1, 2, 3]), min_size=r, max_size=r))
    seqs = [PeriodicBitSeq(tuple(draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))))
            for _ in range(r)]
    assume(not all(s.is_constant() for s in seqs))
    return n, coeffs, seqs


@settings(max_examples=300, deadline=None)
@given(instances())
def test_carry_theorem(inst):
    n, coeffs, seqs = inst
    sol = solve_carries(n, coeffs, seqs)
    q1 = (1 << n) - 1
    total = sum(t * s.to_int() for t, s in zip(coeffs, seqs))
    assert sol.digits.to_int() == total % q1
    assert sol.t_minus == sum(t for t in coeffs if t < 0)
    assert sol.t_plus == sum(t for t in coeffs if t > 0)
    assert all(sol.t_minus <= c < sol.t_plus for c in sol.carries)
    assert satisfies_recurrence(coeffs, seqs, sol)
    assert carry_sum_identity(coeffs, seqs, sol)
    assert all(uniqueness_probe(coeffs, seqs, sol, j) for j in range(n))


def test_plain_copy_has_no_carries():
    x = PeriodicBitSeq((1, 0, 1, 1))
    sol = solve_carries(4, [1], [x])
    assert sol.digits == x and sol.carries == (0, 0, 0, 0)


def test_difference_of_equal_sequences_is_zero():
    x = PeriodicBitSeq((0, 1, 1, 0, 1))
    sol = solve_carries(5, [1, -1], [x, x])
    assert sol.digits.weight() == 0
    assert carry_sum_identity([1, -1], [x, x], sol)


def test_end_around_carry():
    # 3 * 0b0110 = 18 = 3 mod 15: the overflow wraps into bit 0.
    x = PeriodicBitSeq((0, 1, 1, 0))
    sol = solve_carries(4, [3], [x])
    assert sol.digits.to_int() == 3


def test_bounds_are_exhaustive():
    # For 2x - y the window [t_-, t_+ - 1] is [-1, 1]: exactly one closing sequence.
    rng = random.Random(4)
    for _ in range(200):
        n = rng.randint(2, 8)
        x = PeriodicBitSeq(tuple(rng.randint(0, 1) for _ in range(n)))
        y = PeriodicBitSeq(tuple(rng.randint(0, 1) for _ in range(n)))
        if x.is_constant() and y.is_constant():
            continue
        sol = solve_carries(n, [2, -1], [x, y])
        v = [2 * x[j] - y[j] for j in range(n)]
        assert closing_carries(v, sol.digits.bits, -1, 1) == [list(sol.carries)]


def test_validation():
    x = PeriodicBitSeq((0, 1, 0))
    with pytest.raises(DomainError):
        solve_carries(3, [0], [x])
    with pytest.raises(DomainError):
        solve_carries(3, [1, 1], [x])
    with pytest.raises(DomainError):
        solve_carries(4, [1], [x])
    with pytest.raises(DomainError):
        solve_carries(3, [1, 2], [PeriodicBitSeq((0, 0, 0)), PeriodicBitSeq((1, 1, 1))])


def test_periodic_seq():
    s = PeriodicBitSeq.from_int(0b1101, 4)
    assert s.bits == (1, 0, 1, 1) and s[5] == 0 and s.weight() == 3
    assert PeriodicBitSeq.from_int(15, 4).bits == (0, 0, 0, 0)
    assert PeriodicBitSeq.from_int(-1, 4).to_int() == 14


def test_u_values():
    assert u_value(2, 0) == 5 and u_value(2, 1) == 10


@pytest.mark.parametrize("m", [1, 2, 3])
def test_paired_systems_match_weights(m):
    n = 2 * m
    q1 = (1 << n) - 1
    for u in (0, 1):
        for a in range(q1):
            for b in range(q1):
                p = paired_systems(m, u, a, b)
                # wt(u) = m, so the carry sums turn the walk weight into the margin.
                margin = (p.a.weight() + p.b.weight() + p.s.digits.weight()
                          + p.t.digits.weight() - n)
                assert p.walk_weight == margin
                assert weight_identity_check(m, u, a, b) == string_inequality_oracle(m, u, a, b)
