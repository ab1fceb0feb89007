"""Verification routines shared by the CLI and the acceptance tests.

Each ``criterion_*`` returns a dict with at least ``id``, ``name``, ``ok``
and ``seconds``; failures carry a short list of counterexamples.
"""

from __future__ import annotations

import time
from fractions import Fraction
from itertools import combinations_with_replacement

from . import indsys, picbasis, positivity, stability
from .divclass import (
    deg_m04,
    deg_m11,
    divisor0_from_cyclic,
    divisor0_from_vir,
    divisor1_from_vir,
    enumerate_fcurves0,
    fcurve0,
    fingerprint0,
    pair_class_fcurve0,
    vir_intersection_fcurve,
)
from .fusion import CyclicRing, VirRing, rank_genus0, rank_genus1
from .picbasis import fibonacci


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        out = fn(*args, **kwargs)
        out["seconds"] = round(time.perf_counter() - start, 3)
        return out

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def multisets(k: int, n: int, low: int = 1):
    return combinations_with_replacement(range(low, k + 1), n)


@_timed
def criterion_1(k04_max: int = 6, k11_max: int = 12) -> dict:
    """Degree-rank law on M̄_{0,4} and M̄_{1,1}."""
    bad = []
    count = 0
    for k in range(2, k04_max + 1):
        ring = VirRing(k)
        for quad in multisets(k, 4):
            r = rank_genus0(ring, quad)
            count += 1
            if deg_m04(ring, quad) != Fraction(-r * (r - 1), 2):
                bad.append(("0,4", k, quad))
    for k in range(2, k11_max + 1):
        ring = VirRing(k)
        for a in ring.labels:
            r = rank_genus1(ring, [a])
            count += 1
            if deg_m11(ring, a) != -r * (r - 1):
                bad.append(("1,1", k, a))
    return {"id": 1, "name": "degree-rank law", "ok": not bad, "cases": count, "failures": bad[:10]}


@_timed
def criterion_2(n_max: int = 25) -> dict:
    """Fibonacci ranks for W_2^n over Vir_5."""
    ring = VirRing(2)
    bad = []
    for n in range(3, n_max + 1):
        w = (2,) * n
        if rank_genus0(ring, w) != fibonacci(n - 1):
            bad.append(("genus0", n))
        if rank_genus1(ring, w) != fibonacci(n - 1) + fibonacci(n + 1):
            bad.append(("genus1", n))
    return {"id": 2, "name": "Fibonacci ranks", "ok": not bad, "failures": bad}


@_timed
def criterion_3(k_max: int = 4, n_max: int = 7) -> dict:
    """Class pairing of the coinvariant divisor equals the factorization intersection on every F-curve."""
    bad = []
    count = 0
    for k in range(2, k_max + 1):
        ring = VirRing(k)
        for n in range(4, n_max + 1):
            curves = enumerate_fcurves0(n)
            for labels in multisets(k, n):
                d = divisor0_from_vir(ring, labels)
                for f in curves:
                    count += 1
                    if pair_class_fcurve0(d, f) != vir_intersection_fcurve(ring, labels, f):
                        bad.append((k, labels, f.label()))
    return {"id": 3, "name": "oracle equivalence", "ok": not bad, "cases": count, "failures": bad[:10]}


@_timed
def criterion_4(k_max: int = 4, n_max: int = 7) -> dict:
    """F-nefness of every conformal block divisor, and zero iff rank <= 1 for nontrivial labels."""
    bad = []
    count = 0
    for k in range(2, k_max + 1):
        ring = VirRing(k)
        for genus, n_lo in ((0, 4), (1, 1)):
            for n in range(n_lo, n_max + 1):
                for labels in multisets(k, n):
                    rep = positivity.check_fnef(ring, genus, labels)
                    count += 1
                    if not rep.fnef:
                        bad.append(("not F-nef", genus, k, labels, rep.witness[0]))
                    if 1 in labels:
                        continue
                    small = rep.rank <= 1
                    if small != bool(rep.zero) or (not small and not rep.fample):
                        bad.append(("trichotomy", genus, k, labels))
    return {"id": 4, "name": "F-nefness", "ok": not bad, "cases": count, "failures": bad[:10]}


@_timed
def criterion_5(k: int = 5, jobs: int = 1, keep_records: bool = False) -> dict:
    """Strict effectivity of every nontrivial -D_{0,n}(Vir_{2k+1}) below the analytic bound."""
    summary = positivity.verify_conjecture_genvireff(k, jobs=jobs)
    out = {key: v for key, v in summary.items() if key != "records"}
    if keep_records:
        out["records"] = summary["records"]
    return {"id": 5, "name": f"strict effectivity scan k={k}", "ok": summary["all_certified"], **out}


@_timed
def criterion_6(entry_max: int = 4, n_max: int = 6, span: int = 2) -> dict:
    """Stabilization for even tuples and vanishing for odd tuples below the critical level."""
    bad = []
    reports = []
    odd_cases = 0
    for n in range(4, n_max + 1):
        for labels in multisets(entry_max, n):
            t = stability.TupleSpec(labels)
            if t.parity == 0:
                lvl = max(stability.critical_level(t), stability.min_level(t))
                rep = stability.check_stabilization(t, lvl, lvl + span)
                reports.append(rep)
                if not rep.agree:
                    bad.append(("even", labels))
            else:
                k0 = max(stability.min_level(t), (t.weight + 2) // 2)
                for k in range(k0, k0 + span + 1):
                    odd_cases += 1
                    if any(fingerprint0(stability.vir_divisor(t, k))):
                        bad.append(("odd", labels, k))
    return {
        "id": 6, "name": "stabilization", "ok": not bad, "even_tuples": len(reports),
        "odd_cases": odd_cases, "failures": bad[:10], "csv": stability.stabilization_csv(reports),
    }


def _value(t: stability.TupleSpec, k: int, *blocks) -> Fraction:
    d = stability.difference_divisor(t, k)
    f = fcurve0(t.n, *blocks)
    return fingerprint0(d)[enumerate_fcurves0(t.n).index(f)]


@_timed
def criterion_7() -> dict:
    """Worked examples for differences of divisors at consecutive levels."""
    checks = {}
    t = stability.TupleSpec((2, 2, 4, 5, 5))
    checks["odd (2,2,4,5,5): F_{12},3,4,5 = 2"] = _value(t, 5, {1, 2}, 3, 4, 5) == 2
    checks["odd (2,2,4,5,5): F_1,2,{34},5 = 0"] = _value(t, 5, 1, 2, {3, 4}, 5) == 0
    checks["odd (2,2,4,5,5): F-nef"] = stability.check_difference_fnef(t, 5).fnef
    t = stability.TupleSpec((2, 3, 3, 4, 4, 5, 5, 6))
    checks["(2,3,3,4,4,5,5,6): zero curve"] = _value(t, 6, {1, 2, 3, 4, 6}, 5, 7, 8) == 0
    checks["(2,3,3,4,4,5,5,6): nonzero curve"] = _value(t, 6, {1, 2, 3, 4, 5}, 6, 7, 8) != 0
    five = [
        (1, {2, 3, 4, 5}, {6, 7}, 8),
        ({1, 3, 4}, 2, {5, 6, 7}, 8),
        ({1, 2, 4}, 3, {5, 6, 7}, 8),
        ({1, 2, 3, 7}, 4, {5, 6}, 8),
        ({1, 2, 3, 7}, {4, 6}, 5, 8),
    ]
    checks["(2,3,3,4,4,5,5,6): five listed curves nonzero"] = all(_value(t, 6, *b) != 0 for b in five)
    rep = stability.check_difference_fnef(t, 6)
    checks["(2,3,3,4,4,5,5,6): F-nef, not F-ample"] = rep.fnef and not rep.fample
    t = stability.TupleSpec((3, 4, 5, 6, 6, 6))
    checks["(3,4,5,6,6,6): zero curve"] = _value(t, 6, {1, 5, 6}, 2, 3, 4) == 0
    checks["(3,4,5,6,6,6): nonzero curve"] = _value(t, 6, {1, 2, 3}, 4, 5, 6) != 0
    t = stability.TupleSpec((5, 5, 5, 6, 6, 6))
    checks["odd counterexample: Vir_15 < Vir_13 on F_{12},{36},4,5"] = _value(t, 6, {1, 2}, {3, 6}, 4, 5) < 0
    return {"id": 7, "name": "difference examples", "ok": all(checks.values()), "checks": checks}


@_timed
def criterion_8(basis_n: int = 8, t_n: int = 12, fibo_n: int = 30) -> dict:
    """Vir_5 basis of Pic(M̄_{1,n}), T-values and the Fibonacci identities."""
    bad = []
    for n in range(1, basis_n + 1):
        if not picbasis.basis_is_invertible(n):
            bad.append(("basis", n))
    for n in range(2, t_n + 1):
        val = picbasis.t_functional(divisor1_from_vir(VirRing(2), (2,) * n))
        if val != -Fraction(5) ** (n // 2 - 1):
            bad.append(("T", n, val))
    for n in range(1, fibo_n + 1):
        if not picbasis.fibonacci_identities(n)["ok"]:
            bad.append(("Fibonacci", n))
    return {"id": 8, "name": "Picard basis", "ok": not bad, "failures": bad}


@_timed
def criterion_9(ns=(4, 5, 6)) -> dict:
    """Knudsen-type contraction kernels and the four-term sequence."""
    results = []
    for n in ns:
        for i, j in ((n - 1, n), (1, 2)):
            r = picbasis.contraction_kernel_check(n, i, j)
            results.append({key: r[key] for key in ("n", "i", "j", "curves", "dim_pullbacks", "dim_annihilator", "expected", "ok")})
    return {"id": 9, "name": "contraction kernel", "ok": all(r["ok"] for r in results), "results": results}


@_timed
def criterion_10(ps=(Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2)), axiom_n: int = 8, nef_n: int = 10, prop_n: int = 8) -> dict:
    """Two-module inductive family: axioms, positivity, proportionality with Vir_5."""
    bad = []
    for p in ps:
        r = indsys.verify_axioms(indsys.TwoModuleSystem(p), axiom_n)
        if not r["ok"]:
            bad.append(("axioms", str(p), r["errors"][:3]))
        for n in range(4, nef_n + 1):
            rep = indsys.check_dnp_positivity(p, n)
            if not rep.fnef or (p > 0 and not rep.fample):
                bad.append(("positivity", str(p), n))
            if p > 0 and not indsys.coefficient_domination(p, n):
                bad.append(("domination", str(p), n))
    for n in range(4, prop_n + 1):
        if indsys.vir5_proportionality(n) != -5:
            bad.append(("proportionality", n))
    return {"id": 10, "name": "inductive family", "ok": not bad, "failures": bad}


@_timed
def criterion_11(m_max: int = 8, n_max: int = 6) -> dict:
    """Cyclic-ring divisors vanish when the labels sum to m."""
    bad = []
    count = 0
    for m in range(2, m_max + 1):
        ring = CyclicRing(m)
        for n in range(4, n_max + 1):
            for labels in combinations_with_replacement(range(m), n):
                if sum(labels) != m:
                    continue
                count += 1
                if any(fingerprint0(divisor0_from_cyclic(ring, labels))):
                    bad.append((m, labels))
    return {"id": 11, "name": "cyclic vanishing", "ok": not bad and count > 0, "cases": count, "failures": bad[:10]}


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6,
    7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10, 11: criterion_11,
}

