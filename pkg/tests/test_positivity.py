from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement

import pytest
from hypothesis import given, settings, strategies as st

from virblocks.divclass import Divisor0, divisor0_from_vir, fingerprint0
from virblocks.fusion import VirRing, rank_genus0
from virblocks.positivity import (
    STATUSES,
    Effectivity,
    PositivityReport,
    _verify_boundary_sum,
    certify_tuple,
    check_effectivity,
    check_fnef,
    nef_certificate,
    report_from_values,
    size_condition,
    verify_conjecture_genvireff,
)
from virblocks.ratlp import LpProblem

F = Fraction


def test_report_invariants():
    with pytest.raises(ValueError):
        PositivityReport("x", fnef=False, fample=True, witness=None)
    with pytest.raises(ValueError):
        PositivityReport("x", fnef=True, fample=False, witness=("F", F(-1)))
    rep = report_from_values("x", {"a": F(2), "b": F(0)})
    assert rep.fnef and not rep.fample and rep.witness == ("b", 0)
    rep = report_from_values("x", {"a": F(2), "b": F(-1, 3)})
    assert not rep.fnef and rep.witness == ("b", F(-1, 3))


@pytest.mark.parametrize("n", range(4, 10))
def test_vir5_w2_fample(n):
    rep = check_fnef(VirRing(2), 0, [2] * n)
    assert rep.fnef and rep.fample and not rep.zero


def test_rank_one_is_zero():
    for k in range(2, 5):
        ring = VirRing(k)
        for labels in combinations_with_replacement(ring.labels, 5):
            rep = check_fnef(ring, 0, labels)
            if rep.rank <= 1:
                assert rep.zero and all(v == 0 for v in rep.values.values())


@pytest.mark.parametrize("k", [3, 4])
def test_w2_at_2k_minus_1_vanishes(k):
    assert check_fnef(VirRing(k), 0, [2] * (2 * k - 1)).zero


def test_genus_cap():
    with pytest.raises(ValueError):
        check_fnef(VirRing(2), 3, [2], cap=2)


def test_genus1_fnef_sample():
    for labels in ([2], [2, 2], [3, 2], [3, 3, 2]):
        rep = check_fnef(VirRing(3), 1, labels)
        assert rep.fnef


def test_effectivity_zero_divisor():
    e = check_effectivity(Divisor0(5), strict=False)
    assert e.status == "AllStandardNegative" and all(v == 0 for v in e.coefficients.values())


def test_effectivity_standard_regime():
    # nontrivial tuples with n >= 4k-4 have c_I < 0
    for labels in [(2,) * 8, (2, 2, 2, 3, 3, 3, 2, 2), (3,) * 8]:
        d = divisor0_from_vir(VirRing(3), labels)
        e = check_effectivity(d)
        assert e.status == "AllStandardNegative"
        assert _verify_boundary_sum(-d, e.coefficients)


def test_exceptional_case_needs_phase_two():
    d = divisor0_from_vir(VirRing(8), (2, 2, 2, 2, 2, 4, 4, 7))
    assert check_effectivity(d, lp=False).status == "NotAttempted"
    e = check_effectivity(d)
    assert e.status == "LpInteriorFeasible" and e.phase == 2 and e.t > 0
    assert _verify_boundary_sum(-d, e.coefficients)
    assert all(v >= e.t for v in e.coefficients.values())


def test_infeasible_has_farkas_witness():
    # D itself (not -D) of a nonzero conformal block divisor is not effective
    d = -divisor0_from_vir(VirRing(2), [2] * 5)
    e = check_effectivity(d)
    assert e.status == "Infeasible" and e.farkas is not None


def test_size_condition():
    assert size_condition(3, 10, 3)
    assert not size_condition(5, 6, 2)


def test_certify_tuple_records():
    r = certify_tuple(3, (2, 2, 3, 3))
    assert set(r) >= {"k", "labels", "method", "status", "t"} and r["status"] == "certified"
    assert rank_genus0(VirRing(3), [2] * 5) == 1
    assert certify_tuple(3, (2,) * 5)["method"] == "zero"


def test_genvireff_small_k():
    assert verify_conjecture_genvireff(2)["tuples"] == 0
    for k in (3, 4):
        s = verify_conjecture_genvireff(k)
        assert s["all_certified"] and s["analytic_bound_ok"]
    assert verify_conjecture_genvireff(3)["tuples"] == 26


def test_genvireff_full_mode_agrees():
    fast = verify_conjecture_genvireff(3)
    full = verify_conjecture_genvireff(3, full=True)
    assert full["all_certified"] and full["tuples"] == fast["tuples"]


def test_genvireff_deterministic_and_parallel():
    a = verify_conjecture_genvireff(4, jobs=1)["records"]
    b = verify_conjecture_genvireff(4, jobs=2)["records"]
    assert a == b


def test_nef_certificate_vir5_w2_8():
    c = nef_certificate(VirRing(2), [2] * 8)
    assert c.ok and c.nodes[c.root].kind == "effective"


def test_nef_certificate_trivial():
    c = nef_certificate(VirRing(3), [1, 1, 1, 1, 1])
    assert c.ok and c.nodes[c.root].kind == "trivial"


def test_nef_certificate_vir11_n8():
    c = nef_certificate(VirRing(5), [2, 2, 3, 3, 4, 4, 5, 5])
    assert c.ok
    assert all(node.ok for node in c.nodes.values())
    assert c.to_json()["ok"]


def test_statuses_closed():
    assert set(STATUSES) == {"AllStandardNegative", "LpInteriorFeasible", "LpFeasible", "Infeasible", "NotAttempted"}
    with pytest.raises(ValueError):
        Effectivity("Maybe")


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 4).flatmap(lambda k: st.tuples(st.just(k), st.lists(st.integers(2, k), min_size=4, max_size=6))))
def test_fnef_trichotomy_property(kl):
    k, labels = kl
    rep = check_fnef(VirRing(k), 0, labels)
    assert rep.fnef
    assert rep.zero == (rep.rank <= 1)
    if rep.rank > 1:
        assert rep.fample
