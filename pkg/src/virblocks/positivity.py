"""F-nefness, effectivity certificates and recursive nefness certificates.

All inputs are coinvariant divisors D; positivity statements concern the
conformal block divisor -D.
"""

from __future__ import annotations

import time
from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement

from .divclass import (
    Divisor0,
    boundary0,
    boundary_keys0,
    divisor0_from_vir,
    divisor1_from_vir,
    enumerate_fcurves,
    enumerate_fcurves0,
    enumerate_fcurves1,
    fingerprint0,
    standard_form,
    vir_intersection_fcurve,
)
from .divclass.vir import _weights
from .fusion import VirRing, fusion_vector, rank_any, vacuum_multiplicity
from .linalg import independent_rows
from .ratlp import LpProblem, solve
from .rational import fmt

STATUSES = ("AllStandardNegative", "LpInteriorFeasible", "LpFeasible", "Infeasible", "NotAttempted")


@dataclass
class Effectivity:
    status: str = "NotAttempted"
    coefficients: dict[tuple[int, ...], Fraction] | None = None
    t: Fraction | None = None
    farkas: tuple[Fraction, ...] | None = None
    phase: int = 0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown effectivity status {self.status!r}")

    def to_json(self) -> dict:
        out = {"status": self.status, "phase": self.phase}
        if self.t is not None:
            out["t"] = fmt(self.t)
        if self.coefficients is not None:
            out["coefficients"] = {",".join(map(str, k)): fmt(v) for k, v in self.coefficients.items()}
        if self.farkas is not None:
            out["farkas"] = [fmt(v) for v in self.farkas]
        return out


@dataclass
class PositivityReport:
    class_id: str
    fnef: bool
    fample: bool
    witness: tuple[str, Fraction] | None = None
    effectivity: Effectivity = field(default_factory=Effectivity)
    zero: bool | None = None
    rank: int | None = None
    curves: int = 0
    values: dict[str, Fraction] | None = None

    def __post_init__(self):
        if self.fample and not self.fnef:
            raise ValueError("F-ample without F-nef")
        if self.witness is not None and self.witness[1] < 0 and self.fnef:
            raise ValueError("negative witness but F-nef")

    def to_json(self) -> dict:
        return {
            "class_id": self.class_id,
            "fnef": self.fnef,
            "fample": self.fample,
            "zero": self.zero,
            "rank": self.rank,
            "curves": self.curves,
            "witness": None if self.witness is None else {"curve": self.witness[0], "value": fmt(self.witness[1])},
            "effectivity": self.effectivity.to_json(),
        }


def report_from_values(class_id: str, values: dict[str, Fraction], **extra) -> PositivityReport:
    """Build a report from the values of the divisor whose positivity is asked (here -D)."""
    if values:
        worst = min(values.items(), key=lambda kv: kv[1])
        fnef = worst[1] >= 0
        fample = worst[1] > 0
    else:
        worst, fnef, fample = None, True, True
    return PositivityReport(class_id, fnef, fample, worst, curves=len(values), values=values, **extra)


def fcurves_for(genus: int, n: int):
    if genus == 0:
        return enumerate_fcurves0(n)
    if genus == 1:
        return enumerate_fcurves1(n)
    return enumerate_fcurves(genus, n)


def check_fnef(ring: VirRing, genus: int, labels: Iterable[int], cap: int = 2) -> PositivityReport:
    labels = tuple(ring.normalize(a) for a in labels)
    n = len(labels)
    if genus > cap:
        raise ValueError(f"genus {genus} exceeds the cap {cap}")
    if 2 * genus - 2 + n <= 0 or (genus == 0 and n < 3):
        raise ValueError("unstable (g, n)")
    rank = rank_any(ring.k, genus, labels)
    class_id = f"-D_{{{genus},{n}}}(Vir_{2 * ring.k + 1}; {','.join(map(str, labels))})"
    if genus == 0 and n == 3:
        return PositivityReport(class_id, True, True, None, zero=True, rank=rank)
    values = {}
    for f in fcurves_for(genus, n):
        values[f.label()] = -vir_intersection_fcurve(ring, labels, f)
    if genus == 1:
        zero = not any(divisor1_from_vir(ring, labels).coordinates())
    else:
        zero = not any(values.values())
    return report_from_values(class_id, values, zero=zero, rank=rank)


# ---------------------------------------------------------------- effectivity


@lru_cache(maxsize=None)
def _boundary_fingerprints(n: int) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(fingerprint0(boundary0(n, key)) for key in boundary_keys0(n))


@lru_cache(maxsize=None)
def _lp_rows(n: int) -> tuple[int, ...]:
    """F-curves whose fingerprint rows span all rows of the boundary matrix."""
    cols = _boundary_fingerprints(n)
    rows = [list(r) for r in zip(*cols)]
    return tuple(independent_rows(rows))


def _verify_boundary_sum(d: Divisor0, coeffs: dict) -> bool:
    return fingerprint0(Divisor0(d.n, None, coeffs)) == fingerprint0(d)


def check_effectivity(d: Divisor0, strict: bool = True, lp: bool = True) -> Effectivity:
    """Is -d a nonnegative (strict: positive) combination of all boundary divisors?

    Phase 1 looks at the standard form; Phase 2 solves the exact LP.  When
    Phase 1 succeeds Phase 2 is skipped.
    """
    target = -d
    n = d.n
    keys = boundary_keys0(n)
    sf = standard_form(target)
    coeffs = {key: sf.get(key, Fraction(0)) for key in keys}
    ok = all(v > 0 for v in coeffs.values()) if strict else all(v >= 0 for v in coeffs.values())
    if ok:
        if not _verify_boundary_sum(target, coeffs):
            raise AssertionError("standard form does not reproduce the class")
        return Effectivity("AllStandardNegative", coeffs, min(coeffs.values()) if coeffs else None, phase=1)
    if not lp:
        return Effectivity("NotAttempted", phase=1)
    cols = _boundary_fingerprints(n)
    fp = fingerprint0(target)
    rows = _lp_rows(n)
    a = [[col[r] for col in cols] for r in rows]
    b = [fp[r] for r in rows]
    cert = solve(LpProblem.build(a, b, slack=True))
    if not cert.feasible:
        return Effectivity("Infeasible", farkas=cert.y, phase=2)
    x = dict(zip(keys, cert.x))
    if not _verify_boundary_sum(target, x):
        raise AssertionError("LP solution does not reproduce the class")
    status = "LpInteriorFeasible" if cert.t > 0 else "LpFeasible"
    if strict and cert.t <= 0:
        return Effectivity("LpFeasible", x, cert.t, phase=2)
    return Effectivity(status, x, cert.t, phase=2)


# ---------------------------------------------------------------- effectivity scan


def size_condition(k: int, n: int, s: int) -> bool:
    """Sufficient condition on |I| = s <= n/2 for the standard-form coefficient to be negative."""
    if s >= k:
        return True
    return Fraction(1, 2 * k - 1 - s) >= Fraction(1, n - s) + Fraction(1, n - 2)


def standard_coefficient(k: int, labels: tuple[int, ...], inside: tuple[int, ...], outside: tuple[int, ...], rank: int) -> Fraction:
    """Coefficient c_I of δ_{0,I} in the standard form of D (not -D)."""
    h = _weights(k)
    n = len(labels)
    s = len(inside)
    h_in = sum((h[a] for a in inside), Fraction(0))
    h_out = sum((h[a] for a in outside), Fraction(0))
    psi_part = rank * (h_in * (n - s) * (n - s - 1) + h_out * s * (s - 1)) / ((n - 1) * (n - 2))
    fi, fo = fusion_vector(k, inside), fusion_vector(k, outside)
    b = sum((h[w] * m * fo.get(w, 0) for w, m in fi.items()), Fraction(0))
    return psi_part - b


def _sub_multisets(labels: tuple[int, ...], size: int):
    seen = set()
    for idx in combinations(range(len(labels)), size):
        inside = tuple(labels[i] for i in idx)
        if inside in seen:
            continue
        seen.add(inside)
        rest = list(labels)
        for a in inside:
            rest.remove(a)
        yield inside, tuple(rest)


def certify_tuple(k: int, labels: tuple[int, ...], full: bool = False, lp_max_n: int = 10) -> dict:
    """Certify strict effectivity of -D_{0,n}(Vir_{2k+1}, labels) for one sorted tuple."""
    n = len(labels)
    rec = {"k": k, "labels": list(labels)}
    total = sum(a - 1 for a in labels)
    rank = vacuum_multiplicity(k, labels)
    if rank <= 1:
        return {**rec, "method": "zero", "status": "certified", "t": fmt(0), "rank": rank}
    if not full and total <= 2 * k - 1:
        # odd: vanishes (stabilization); even: strictly effective at its critical level
        status = "certified"
        method = "stable"
        return {**rec, "method": method, "status": status, "t": None, "rank": rank}
    worst = None
    failed = False
    for s in range(2, n // 2 + 1):
        if not full and size_condition(k, n, s):
            continue
        for inside, outside in _sub_multisets(labels, s):
            c = standard_coefficient(k, labels, inside, outside, rank)
            if worst is None or -c < worst:
                worst = -c
            if c >= 0:
                failed = True
                break
        if failed:
            break
    if not failed:
        return {**rec, "method": "standard", "status": "certified", "t": None if worst is None else fmt(worst), "rank": rank}
    if n > lp_max_n:
        return {**rec, "method": "lp", "status": "NotAttempted", "t": None, "rank": rank}
    eff = check_effectivity(divisor0_from_vir(VirRing(k), labels), strict=True)
    status = "certified" if eff.status in ("AllStandardNegative", "LpInteriorFeasible") else eff.status
    return {**rec, "method": "lp", "status": status, "t": None if eff.t is None else fmt(eff.t), "rank": rank}


def _tuples(k: int, n: int):
    return combinations_with_replacement(range(2, k + 1), n)


def _scan_n(args):
    k, n, full, lp_max_n = args
    return [certify_tuple(k, t, full, lp_max_n) for t in _tuples(k, n)]


def verify_conjecture_genvireff(k: int, n_max: int | None = None, full: bool = False, jobs: int = 1,
                                lp_max_n: int = 10, n_min: int = 4) -> dict:
    """Scan all nontrivial tuples with n_min <= n < 4k-4 (or <= n_max)."""
    start = time.perf_counter()
    top = 4 * k - 5 if n_max is None else n_max
    tasks = [(k, n, full, lp_max_n) for n in range(n_min, top + 1)]
    if jobs > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_scan_n, tasks))
    else:
        chunks = [_scan_n(t) for t in tasks]
    records = [r for chunk in chunks for r in chunk]
    analytic = all(size_condition(k, n, s) for n in range(4 * k - 4, 8 * k) for s in range(2, n // 2 + 1))
    counts: dict[str, int] = {}
    for r in records:
        counts[r["method"]] = counts.get(r["method"], 0) + 1
    failures = [r for r in records if r["status"] != "certified"]
    return {
        "k": k,
        "n_range": [n_min, top],
        "tuples": len(records),
        "methods": counts,
        "failures": failures,
        "analytic_bound_ok": analytic,
        "all_certified": not failures and analytic,
        "seconds": time.perf_counter() - start,
        "records": records,
    }


# ---------------------------------------------------------------- nef certificate


@dataclass
class NefNode:
    labels: tuple[int, ...]
    kind: str  # "trivial", "fnef-leaf", "effective", "missing"
    ok: bool
    effectivity: str | None = None
    children: list[tuple[int, ...]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "kind": self.kind,
            "ok": self.ok,
            "effectivity": self.effectivity,
            "children": [list(c) for c in self.children],
        }


@dataclass
class NefCertificate:
    k: int
    root: tuple[int, ...]
    nodes: dict[tuple[int, ...], NefNode]

    @property
    def ok(self) -> bool:
        return self.nodes[self.root].ok

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "root": list(self.root),
            "ok": self.ok,
            "nodes": [self.nodes[key].to_json() for key in sorted(self.nodes, key=lambda t: (len(t), t))],
        }


def _reduce(labels) -> tuple[int, ...]:
    return tuple(sorted(a for a in labels if a != 1))


def nef_certificate(ring: VirRing, labels: Iterable[int], leaf_n: int = 7) -> NefCertificate:
    """Recursive certificate that -D_{0,n} is nef.

    Trivial labels are dropped first (the divisor is a pullback).  Tuples
    with at most ``leaf_n`` points are leaves certified by F-nefness.  A larger
    tuple needs -D written as a nonnegative boundary combination and
    certificates for every lower divisor appearing in the restriction to a
    boundary divisor with positive coefficient.
    """
    k = ring.k
    nodes: dict[tuple[int, ...], NefNode] = {}

    def visit(key: tuple[int, ...]) -> bool:
        if key in nodes:
            return nodes[key].ok
        n = len(key)
        if n <= 3 or vacuum_multiplicity(k, key) <= 1:
            nodes[key] = NefNode(key, "trivial", True)
            return True
        if n <= leaf_n:
            rep = check_fnef(ring, 0, key)
            nodes[key] = NefNode(key, "fnef-leaf", rep.fnef)
            return rep.fnef
        nodes[key] = node = NefNode(key, "missing", False)
        eff = check_effectivity(divisor0_from_vir(ring, key), strict=False)
        node.effectivity = eff.status
        if eff.coefficients is None or eff.status == "Infeasible":
            return False
        node.kind = "effective"
        children = set()
        for subset, coeff in eff.coefficients.items():
            if coeff <= 0:
                continue
            inside = tuple(key[p - 1] for p in subset)
            outside = tuple(key[p - 1] for p in range(1, n + 1) if p not in subset)
            for here, there in ((inside, outside), (outside, inside)):
                mult = fusion_vector(k, there)
                for w in mult:
                    children.add(_reduce(here + (w,)))
        node.children = sorted(children, key=lambda t: (len(t), t))
        node.ok = all(visit(c) for c in node.children)
        return node.ok

    root = _reduce(ring.normalize(a) for a in labels)
    visit(root)
    return NefCertificate(k, root, nodes)
