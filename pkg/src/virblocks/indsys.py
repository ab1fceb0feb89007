"""Inductive systems of line bundles on M̄_{0,n} and the two-module family D_n^p.

A system has a label set with a unit V, a commutative product with
nonnegative coefficients, a duality, and for every label vector a divisor
class.  Ranks are the V-coefficient of the iterated product.
"""

from __future__ import annotations

from collections.abc import Callable, Hashable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .divclass import (
    Divisor0,
    boundary_keys0,
    divisor0_from_vir,
    enumerate_fcurves0,
    fingerprint0,
    pullback0,
    relabel0,
    restrict_boundary0,
)
from .fusion import VirRing, fusion_vector
from .positivity import PositivityReport, check_effectivity, report_from_values

Label = Hashable
Combination = dict  # label -> Fraction


@dataclass
class InductiveSystem:
    name: str
    labels: tuple[Label, ...]  # labels[0] is the unit V
    product: Callable[[Label, Label], Combination]
    dual: Callable[[Label], Label]
    divisor_fn: Callable[[tuple[Label, ...]], Divisor0]
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def unit(self) -> Label:
        return self.labels[0]

    def multiply(self, x: Combination, y: Combination) -> Combination:
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for c, m in self.product(a, b).items():
                    out[c] = out.get(c, 0) + Fraction(ca) * cb * m
        return {c: v for c, v in out.items() if v}

    def fuse(self, labels: Sequence[Label]) -> Combination:
        key = tuple(labels)
        if key not in self._cache:
            acc = {self.unit: Fraction(1)}
            for a in key:
                acc = self.multiply(acc, {a: Fraction(1)})
            self._cache[key] = acc
        return self._cache[key]

    def rank(self, labels: Sequence[Label]) -> Fraction:
        return self.fuse(labels).get(self.unit, Fraction(0))

    def divisor(self, labels: Sequence[Label]) -> Divisor0:
        labels = tuple(labels)
        if len(labels) < 3:
            raise ValueError("divisors live on M̄_{0,n} with n >= 3")
        if len(labels) == 3:
            return Divisor0(3)
        return self.divisor_fn(labels)

    @classmethod
    def from_conformal_weights(cls, name, labels, product_fn, dual, cw: Callable[[Label], Fraction]) -> InductiveSystem:
        """D_n(W) = rank·Σ cw(W_i) ψ_i - Σ_I b_I δ_{0,I}, b_I = Σ_M cw(M) rank(W_I, M) rank(W_{I^c}, M')."""
        sys = cls(name, tuple(labels), product_fn, dual, lambda w: None)

        def build(w: tuple) -> Divisor0:
            n = len(w)
            r = sys.rank(w)
            psi = [r * Fraction(cw(a)) for a in w]
            boundary = {}
            for key in boundary_keys0(n):
                inside = [w[p - 1] for p in key]
                outside = [w[p - 1] for p in range(1, n + 1) if p not in key]
                b = Fraction(0)
                for m in sys.labels:
                    weight = Fraction(cw(m))
                    if weight:
                        b += weight * sys.rank(inside + [m]) * sys.rank(outside + [sys.dual(m)])
                if b:
                    boundary[key] = -b
            return Divisor0(n, psi, boundary)

        sys.divisor_fn = build
        return sys


# ---------------------------------------------------------------- R_n^p and D_n^p


@lru_cache(maxsize=None)
def _r_sequence(p: Fraction, upto: int) -> tuple[Fraction, ...]:
    seq = [Fraction(0), Fraction(0), Fraction(1)]  # index 0 unused
    while len(seq) <= upto:
        seq.append(p * seq[-1] + seq[-2])
    return tuple(seq)


def r_value(p, n: int) -> Fraction:
    """R_n^p from R_1 = 0, R_2 = 1, R_{n+1} = p R_n + R_{n-1}."""
    if n < 1:
        raise ValueError("R_n^p is defined for n >= 1")
    return _r_sequence(Fraction(p), max(n, 2))[n]


def _check_p(p) -> Fraction:
    p = Fraction(p)
    if p < 0:
        raise ValueError("p must be nonnegative")
    return p


def d_np_class(p, n: int) -> Divisor0:
    """R_n ψ - Σ_I R_{|I|+1} R_{n-|I|+1} δ_{0,I} on M̄_{0,n}."""
    p = _check_p(p)
    if n < 4:
        raise ValueError("D_n^p needs n >= 4")
    r = _r_sequence(p, n + 1)
    boundary = {key: -r[len(key) + 1] * r[n - len(key) + 1] for key in boundary_keys0(n)}
    return Divisor0(n, [r[n]] * n, boundary)


def embed(d: Divisor0, positions: Sequence[int], n: int) -> Divisor0:
    """Pull d back to M̄_{0,n}, putting its points at ``positions`` and forgetting the others."""
    m = d.n
    for _ in range(n - m):
        d = pullback0(d)
    others = [q for q in range(1, n + 1) if q not in set(positions)]
    return relabel0(d, list(positions) + others)


class TwoModuleSystem(InductiveSystem):
    """Labels V, W with W·W = V + pW."""

    def __init__(self, p):
        self.p = _check_p(p)
        V, W = "V", "W"

        def prod(a, b):
            if a == V:
                return {b: Fraction(1)}
            if b == V:
                return {a: Fraction(1)}
            return {V: Fraction(1), W: self.p} if self.p else {V: Fraction(1)}

        def divisor(w):
            pos = [i for i, a in enumerate(w, start=1) if a == W]
            if len(pos) < 4:
                return Divisor0(len(w))
            return embed(d_np_class(self.p, len(pos)), pos, len(w))

        super().__init__(f"two-module p={self.p}", (V, W), prod, lambda a: a, divisor)

    def r(self, n: int) -> Fraction:
        return r_value(self.p, n)


def two_module_by_weights(p) -> InductiveSystem:
    """The same family through the conformal-weight constructor with cw(V) = 0, cw(W) = 1."""
    base = TwoModuleSystem(p)
    return InductiveSystem.from_conformal_weights(
        f"two-module cw p={base.p}", base.labels, base.product, base.dual, lambda a: 0 if a == "V" else 1)


def vir_system(k: int = 2) -> InductiveSystem:
    """The system induced by Vir_{2,2k+1}: fusion rules and its coinvariant divisors."""
    ring = VirRing(k)

    def prod(a, b):
        return {c: Fraction(m) for c, m in fusion_vector(k, (a, b)).items()}

    return InductiveSystem(f"Vir_{2 * k + 1}", tuple(ring.labels), prod, lambda a: a,
                           lambda w: divisor0_from_vir(ring, w))


def trivial_system() -> InductiveSystem:
    return InductiveSystem("trivial", ("V",), lambda a, b: {"V": Fraction(1)}, lambda a: a, lambda w: Divisor0(len(w)))


# ---------------------------------------------------------------- axioms


def _ring_axioms(sys: InductiveSystem) -> list[str]:
    errors = []
    labs = sys.labels
    one = {sys.unit: Fraction(1)}
    for a in labs:
        if sys.multiply(one, {a: 1}) != {a: Fraction(1)}:
            errors.append(f"V is not a unit for {a}")
        duals = [b for b in labs if sys.product(a, b).get(sys.unit, 0) == 1]
        if duals != [sys.dual(a)]:
            errors.append(f"dual of {a} is not unique or does not match")
        for b in labs:
            ab = sys.product(a, b)
            if ab != sys.product(b, a):
                errors.append(f"{a}·{b} is not commutative")
            if any(v < 0 for v in ab.values()):
                errors.append(f"{a}·{b} has a negative coefficient")
            for c in labs:
                left = sys.multiply(ab, {c: 1})
                right = sys.multiply({a: 1}, sys.product(b, c))
                if left != right:
                    errors.append(f"({a}·{b})·{c} differs from {a}·({b}·{c})")
    return errors


def _label_vectors(sys: InductiveSystem, n: int):
    return product(sys.labels, repeat=n)


def _sorted_with_positions(sys: InductiveSystem, w: tuple) -> tuple[tuple, list[int]]:
    order = {a: i for i, a in enumerate(sys.labels)}
    perm = sorted(range(len(w)), key=lambda i: order[w[i]])
    return tuple(w[i] for i in perm), [i + 1 for i in perm]


def verify_axioms(sys: InductiveSystem, n_max: int, exhaustive: bool = False) -> dict:
    """Ring axioms, propagation of vacua, factorization and rank factorization up to n_max points.

    Every label vector is checked to be a relabeling of its sorted form
    (S_n-equivariance).  Factorization is then checked on sorted vectors
    along every boundary divisor, which covers all (vector, boundary) pairs
    up to relabeling; ``exhaustive`` checks every vector directly instead.
    """
    errors = _ring_axioms(sys)
    checked = {"equivariance": 0, "propagation": 0, "factorization": 0, "rank": 0}
    for n in range(4, n_max + 1):
        for w in _label_vectors(sys, n):
            srt, positions = _sorted_with_positions(sys, w)
            if srt == w:
                continue
            checked["equivariance"] += 1
            if fingerprint0(relabel0(sys.divisor(srt), positions)) != fingerprint0(sys.divisor(w)):
                errors.append(f"divisor of {w} is not the relabeled divisor of {srt}")
    for n in range(3, n_max):
        for w in _label_vectors(sys, n):
            lifted = sys.divisor(w + (sys.unit,))
            base = sys.divisor(w)
            expect = pullback0(base) if n >= 4 else Divisor0(4)
            checked["propagation"] += 1
            if fingerprint0(lifted) != fingerprint0(expect):
                errors.append(f"propagation fails for {w}")
    for n in range(4, n_max + 1):
        for w in _label_vectors(sys, n):
            if not exhaustive and _sorted_with_positions(sys, w)[0] != w:
                continue
            d = sys.divisor(w)
            total = sys.rank(w)
            for key in boundary_keys0(n):
                inside = tuple(w[p - 1] for p in key)
                outside = tuple(w[p - 1] for p in range(1, n + 1) if p not in key)
                split = sum((sys.rank(inside + (m,)) * sys.rank(outside + (sys.dual(m),)) for m in sys.labels), Fraction(0))
                checked["rank"] += 1
                if split != total:
                    errors.append(f"rank factorization fails for {w} along {key}")
                f1, f2 = restrict_boundary0(d, key)
                for side, here, there, got in ((0, inside, outside, f1), (1, outside, inside, f2)):
                    if len(here) + 1 < 4:
                        continue
                    want = Divisor0(len(here) + 1)
                    for m in sys.labels:
                        c = sys.rank(there + (sys.dual(m),))
                        if c:
                            want = want + sys.divisor(here + (m,)) * c
                    checked["factorization"] += 1
                    if fingerprint0(got) != fingerprint0(want):
                        errors.append(f"factorization fails for {w} along {key} (side {side})")
    return {"system": sys.name, "n_max": n_max, "checked": checked, "errors": errors[:20], "ok": not errors}


# ---------------------------------------------------------------- positivity of D_n^p


def factorized_intersection(p, n: int, blocks: Sequence[Sequence[int]]) -> Fraction:
    """D_n^p · F_{I_1..I_4} = Π R_{|I_i|+1} · deg D_4^p with deg D_4^p = p² + 4."""
    p = _check_p(p)
    out = p * p + 4
    for b in blocks:
        out *= r_value(p, len(b) + 1)
    return out


def check_dnp_positivity(p, n: int, lp_max_n: int = 8) -> PositivityReport:
    p = _check_p(p)
    d = d_np_class(p, n)
    curves = enumerate_fcurves0(n)
    fp = fingerprint0(d)
    values = {}
    for f, v in zip(curves, fp):
        if v != factorized_intersection(p, n, f.blocks):
            raise AssertionError(f"factorized intersection disagrees on {f.label()}")
        values[f.label()] = v
    eff = check_effectivity(-d, strict=p > 0, lp=n <= lp_max_n)
    return report_from_values(f"D_{n}^{p}", values, zero=not any(fp), effectivity=eff)


def coefficient_domination(p, n: int) -> bool:
    """R_{i+1} R_{n-i+1} < R_n for 2 <= i <= n/2."""
    return all(r_value(p, i + 1) * r_value(p, n - i + 1) < r_value(p, n) for i in range(2, n // 2 + 1))


def vir5_proportionality(n: int) -> Fraction | None:
    """The constant c with fingerprint(D_n^1) = c · fingerprint(D_{0,n}(Vir_5, W_2^n)), or None."""
    a = fingerprint0(d_np_class(1, n))
    b = fingerprint0(divisor0_from_vir(VirRing(2), (2,) * n))
    ratio = None
    for x, y in zip(a, b):
        if y == 0:
            if x != 0:
                return None
            continue
        r = x / y
        if ratio is None:
            ratio = r
        elif r != ratio:
            return None
    return ratio

