from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import fib
from virblocks.divclass import enumerate_fcurves0, fingerprint0
from virblocks.indsys import (
    InductiveSystem,
    TwoModuleSystem,
    check_dnp_positivity,
    coefficient_domination,
    d_np_class,
    factorized_intersection,
    r_value,
    trivial_system,
    two_module_by_weights,
    verify_axioms,
    vir5_proportionality,
    vir_system,
)

F = Fraction


def test_r_values():
    assert [r_value(1, n) for n in range(1, 9)] == [fib(n - 1) for n in range(1, 9)]
    assert r_value(1, 4) == 2
    assert all(r_value(p, 2) == 1 for p in (0, F(1, 2), 3))
    assert [r_value(0, n) for n in range(1, 9)] == [0, 1, 0, 1, 0, 1, 0, 1]
    with pytest.raises(ValueError):
        r_value(1, 0)
    with pytest.raises(ValueError):
        d_np_class(-1, 4)


@pytest.mark.parametrize("p", [0, 1, 2, 3])
def test_cassini_from_recurrence(p):
    for n in range(2, 31):
        assert r_value(p, n) ** 2 - r_value(p, n - 1) * r_value(p, n + 1) == (-1) ** n


def test_dnp_class_shape():
    d = d_np_class(1, 4)
    assert d.psi == (2, 2, 2, 2)
    assert set(d.boundary.values()) == {-1}
    assert fingerprint0(d) == (5,)
    d = d_np_class(F(1, 2), 6)
    r = {m: r_value(F(1, 2), m) for m in range(1, 8)}
    for key, v in d.boundary.items():
        assert v == -r[len(key) + 1] * r[6 - len(key) + 1]


def test_p0_zero_pattern():
    for n in range(4, 9):
        for f, v in zip(enumerate_fcurves0(n), fingerprint0(d_np_class(0, n))):
            has_even = any(len(b) % 2 == 0 for b in f.blocks)
            assert (v == 0) == has_even


def test_factorized_formula_matches_pairing():
    for p in (0, F(1, 3), 2):
        for n in range(4, 8):
            fp = fingerprint0(d_np_class(p, n))
            for f, v in zip(enumerate_fcurves0(n), fp):
                assert v == factorized_intersection(p, n, f.blocks)


@pytest.mark.parametrize("p", [0, F(1, 2), 1, 2])
def test_axioms_two_module(p):
    r = verify_axioms(TwoModuleSystem(p), 7)
    assert r["ok"], r["errors"][:3]


def test_axioms_exhaustive_small():
    assert verify_axioms(TwoModuleSystem(F(1, 2)), 6, exhaustive=True)["ok"]


def test_axioms_other_systems():
    assert verify_axioms(trivial_system(), 6)["ok"]
    assert verify_axioms(vir_system(2), 7)["ok"]
    assert verify_axioms(vir_system(3), 6)["ok"]


def test_conformal_weight_constructor_agrees():
    for p in (0, 1, F(3, 2)):
        a, b = TwoModuleSystem(p), two_module_by_weights(p)
        for w in [("W",) * 5, ("W", "V", "W", "W", "W"), ("W",) * 6]:
            assert fingerprint0(a.divisor(w)) == fingerprint0(b.divisor(w))


def test_broken_system_is_caught():
    base = TwoModuleSystem(1)
    bad = InductiveSystem("bad", base.labels, base.product, base.dual,
                          lambda w: d_np_class(1, len(w)) * 2 if len(w) == 5 else base.divisor(w))
    assert not verify_axioms(bad, 5)["ok"]


def test_positivity_examples():
    rep = check_dnp_positivity(2, 6)
    assert rep.fnef and rep.fample
    rep = check_dnp_positivity(0, 6)
    assert rep.fnef and not rep.fample
    rep = check_dnp_positivity(1, 7)
    assert rep.effectivity.status == "AllStandardNegative"


@pytest.mark.parametrize("p", [F(1, 2), 1, 2, 3])
def test_coefficient_domination(p):
    assert all(coefficient_domination(p, n) for n in range(4, 31))


def test_vir5_proportionality():
    assert all(vir5_proportionality(n) == -5 for n in range(4, 9))


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=0, max_value=5, max_denominator=6), st.integers(4, 7))
def test_dnp_fnef_property(p, n):
    fp = fingerprint0(d_np_class(p, n))
    assert all(v >= 0 for v in fp)
    if p > 0:
        assert all(v > 0 for v in fp)
