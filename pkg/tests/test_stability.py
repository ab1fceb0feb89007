from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from virblocks.divclass import fcurve0, enumerate_fcurves0, fingerprint0
from virblocks.fusion import VirRing, rank_genus0
from virblocks.stability import (
    CSV_COLUMNS,
    TupleSpec,
    allowed_channels,
    check_difference_fnef,
    check_stabilization,
    critical_level,
    difference_divisor,
    difference_hypotheses,
    stabilization_csv,
    stable_divisor,
    stable_effectivity,
    steff_certificate,
    vir_divisor,
)


def value(d, *blocks):
    return fingerprint0(d)[enumerate_fcurves0(d.n).index(fcurve0(d.n, *blocks))]


def test_tuple_spec():
    t = TupleSpec((2, 2, 4, 5, 5))
    assert t.n == 5 and t.weight == 13 and t.parity == 1
    with pytest.raises(ValueError):
        TupleSpec((0, 2))
    with pytest.raises(ValueError):
        t.check_level(2)


def test_critical_levels():
    assert critical_level(TupleSpec((1, 1, 1, 1))) == 1
    assert critical_level(TupleSpec((2, 2, 4, 5, 5))) == 8
    assert critical_level(TupleSpec((3, 4, 5, 6, 6, 6))) == 13


def test_allowed_channels_examples():
    raw, normalized = allowed_channels(2, (2, 2))
    assert raw == (1, 3) and normalized == (1, 2)
    for k in range(2, 5):
        for a in range(1, 2 * k + 1):
            assert 1 in allowed_channels(k, (a, a))[0]


def test_channels_monotone_in_k():
    for k in range(2, 6):
        for n in range(1, 6):
            for labels in combinations_with_replacement(range(1, 2 * k + 1), n):
                lo = set(allowed_channels(k, labels)[0])
                hi = set(allowed_channels(k + 1, labels)[0])
                assert lo <= hi


def test_even_rank_monotone():
    for k in range(2, 6):
        for n in range(3, 7):
            for labels in combinations_with_replacement(range(1, min(2 * k, 6) + 1), n):
                t = TupleSpec(labels)
                if t.parity == 0:
                    assert rank_genus0(VirRing(k), labels) <= rank_genus0(VirRing(k + 1), labels)


def test_odd_vanishing_exhaustive():
    for k in range(2, 6):
        for n in range(4, 7):
            for labels in combinations_with_replacement(range(1, 2 * k + 1), n):
                t = TupleSpec(labels)
                if t.parity == 1 and t.weight <= 2 * k - 1:
                    assert not any(fingerprint0(vir_divisor(t, k)))


def test_stable_divisor_examples():
    assert not any(fingerprint0(stable_divisor(TupleSpec((2, 2, 2, 3)))))
    assert not any(fingerprint0(stable_divisor(TupleSpec((1, 1, 1, 1, 1)))))
    t = TupleSpec((2, 2, 3, 3))
    l = critical_level(t)
    assert fingerprint0(vir_divisor(t, l)) == fingerprint0(vir_divisor(t, l + 1)) == fingerprint0(stable_divisor(t))


def test_check_stabilization():
    rep = check_stabilization(TupleSpec((2, 2, 3, 3)), 2, 6)
    assert rep.agree and rep.k_first_stable == 2 and not rep.zero
    rep = check_stabilization(TupleSpec((3, 3, 3, 3)), 1, 3)
    assert rep.ks == ()
    for labels in combinations_with_replacement(range(2, 5), 5):
        t = TupleSpec(labels)
        if t.parity == 0:
            rep = check_stabilization(t, 1, critical_level(t) + 2)
            assert rep.agree and rep.k_first_stable <= critical_level(t)


def test_stabilization_csv():
    reps = [check_stabilization(TupleSpec((2, 2, 3, 3)), 2, 4)]
    text = stabilization_csv(reps)
    lines = text.splitlines()
    assert lines[0] == "# schema: v1" and lines[1].split(",") == CSV_COLUMNS
    assert lines[2] == "2 2 3 3,0,4,2,0"


def test_difference_examples():
    t = TupleSpec((2, 2, 4, 5, 5))
    d = difference_divisor(t, 5)
    assert value(d, {1, 2}, 3, 4, 5) == 2
    assert value(d, 1, 2, {3, 4}, 5) == 0
    assert check_difference_fnef(t, 5).fnef and difference_hypotheses(t, 5)

    t = TupleSpec((2, 3, 3, 4, 4, 5, 5, 6))
    d = difference_divisor(t, 6)
    assert value(d, {1, 2, 3, 4, 6}, 5, 7, 8) == 0
    assert value(d, {1, 2, 3, 4, 5}, 6, 7, 8) == 1
    listed = [
        (1, {2, 3, 4, 5}, {6, 7}, 8),
        ({1, 3, 4}, 2, {5, 6, 7}, 8),
        ({1, 2, 4}, 3, {5, 6, 7}, 8),
        ({1, 2, 3, 7}, 4, {5, 6}, 8),
        ({1, 2, 3, 7}, {4, 6}, 5, 8),
    ]
    assert [value(d, *b) for b in listed] == [1, 1, 1, 3, 3]


def test_equal_rings_give_zero():
    t = TupleSpec((2, 2, 3, 3))
    assert not any(fingerprint0(vir_divisor(t, 4) - vir_divisor(t, 4)))


def test_known_failure_outside_hypotheses():
    t = TupleSpec((5, 5, 5, 6, 6, 6))
    rep = check_difference_fnef(t, 6)
    assert not rep.fnef and rep.witness[1] == -20
    assert not difference_hypotheses(t, 6)


def test_steff_examples():
    c = steff_certificate(TupleSpec((2, 2, 2, 2)))
    assert c.k == 3 and c.rank == 2 and c.positive and c.cyclic_zero
    assert set(c.coefficients.values()) == {Fraction(1, 3)}
    c = steff_certificate(TupleSpec((2, 3, 3, 4, 5)))
    assert c.k == 7 and c.rank == 5 and c.positive and c.cyclic_zero
    with pytest.raises(ValueError):
        steff_certificate(TupleSpec((2, 2, 2, 3)))


def test_steff_over_small_tuples():
    for n in range(4, 7):
        for labels in combinations_with_replacement(range(2, 6), n):
            t = TupleSpec(labels)
            if t.parity:
                continue
            c = steff_certificate(t)
            assert c.cyclic_zero
            assert c.zero or c.positive


def test_stable_effectivity_small():
    for labels in [(2, 2, 3, 3), (2, 2, 2, 2, 2, 2), (3, 3, 4, 4, 2, 2)]:
        assert stable_effectivity(TupleSpec(labels)) in ("AllStandardNegative", "LpInteriorFeasible", "Zero")


def test_stable_divisors_zero_or_fample_and_effective():
    found = 0
    for n in range(4, 9):
        for labels in combinations_with_replacement(range(2, 4), n):
            t = TupleSpec(labels)
            fp = fingerprint0(-stable_divisor(t))
            if not any(fp):
                continue
            found += 1
            assert all(v > 0 for v in fp)
            assert stable_effectivity(t) in ("AllStandardNegative", "LpInteriorFeasible")
    assert found == 19
