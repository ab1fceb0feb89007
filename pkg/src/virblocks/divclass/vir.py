"""Coinvariant divisors from fusion data and their F-curve intersections.

Every divisor built here is the coinvariant divisor D; the conformal block
divisor is -D.  The boundary weights follow the first-Chern-class formula

    D = rank * (c/2 λ + Σ h_i ψ_i) - b_irr δ_irr - Σ b_I δ_{0,I},
    b_I = Σ_W h_W rank(W^I ⊗ W) rank(W^{I^c} ⊗ W'),

with λ absent in genus 0.
"""

from __future__ import annotations

from collections.abc import Iterable
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, product

from ..fusion import (
    CyclicRing,
    VirRing,
    central_charge,
    conformal_weight,
    cyclic_fusion,
    cyclic_weight,
    fusion_vector,
    rank_any,
    vacuum_multiplicity,
)
from .classes import Divisor0, Divisor1, DivisorError, boundary_keys0
from .fcurves import FCurve


def _normalized(ring: VirRing, labels: Iterable[int]) -> tuple[int, ...]:
    return tuple(ring.normalize(a) for a in labels)


@lru_cache(maxsize=64)
def _weights(k: int) -> tuple[Fraction, ...]:
    ring = VirRing(k)
    return (Fraction(0),) + tuple(conformal_weight(ring, a) for a in ring.labels)


def divisor0_from_vir(ring: VirRing, labels: Iterable[int]) -> Divisor0:
    labels = _normalized(ring, labels)
    n = len(labels)
    if n < 4:
        raise DivisorError("genus-0 divisors need n >= 4")
    return _divisor0_cached(ring.k, labels)


@lru_cache(maxsize=4096)
def _divisor0_cached(k: int, labels: tuple[int, ...]) -> Divisor0:
    n = len(labels)
    h = _weights(k)
    r = vacuum_multiplicity(k, labels)
    psi = [r * h[a] for a in labels]
    boundary = {}
    for key in boundary_keys0(n):
        ks = set(key)
        inside = tuple(labels[p - 1] for p in key)
        outside = tuple(labels[p - 1] for p in range(1, n + 1) if p not in ks)
        fi, fo = fusion_vector(k, inside), fusion_vector(k, outside)
        b = sum((h[w] * m * fo.get(w, 0) for w, m in fi.items()), Fraction(0))
        if b:
            boundary[key] = -b
    return Divisor0(n, psi, boundary)


def divisor1_from_vir(ring: VirRing, labels: Iterable[int]) -> Divisor1:
    labels = _normalized(ring, labels)
    if not labels:
        raise DivisorError("genus-1 divisors need n >= 1")
    return _divisor1_cached(ring.k, labels)


@lru_cache(maxsize=4096)
def _divisor1_cached(k: int, labels: tuple[int, ...]) -> Divisor1:
    n = len(labels)
    h = _weights(k)
    c = central_charge(VirRing(k))
    r = rank_any(k, 1, labels)
    psi = [r * h[a] for a in labels]
    b_irr = sum((h[w] * vacuum_multiplicity(k, labels + (w, w)) for w in range(1, k + 1)), Fraction(0))
    boundary = {}
    pts = range(1, n + 1)
    for size in range(2, n + 1):
        for s in combinations(pts, size):
            ss = set(s)
            inside = tuple(labels[p - 1] for p in s)
            outside = tuple(labels[p - 1] for p in pts if p not in ss)
            fi = fusion_vector(k, inside)
            b = Fraction(0)
            for w, m in fi.items():
                if h[w]:
                    b += h[w] * m * rank_any(k, 1, outside + (w,))
            if b:
                boundary[s] = -b
    return Divisor1(n, r * c / 2, -b_irr, psi, boundary)


def divisor0_from_cyclic(ring: CyclicRing, labels: Iterable[int]) -> Divisor0:
    labels = tuple(ring.check(a) for a in labels)
    n = len(labels)
    if n < 4:
        raise DivisorError("genus-0 divisors need n >= 4")
    r = cyclic_fusion(ring, labels)
    psi = [r * cyclic_weight(ring, a) for a in labels]
    boundary = {}
    for key in boundary_keys0(n):
        inside = [labels[p - 1] for p in key]
        outside = [labels[p - 1] for p in range(1, n + 1) if p not in key]
        b = Fraction(0)
        for w in ring.labels:
            b += cyclic_weight(ring, w) * cyclic_fusion(ring, inside + [w]) * cyclic_fusion(ring, outside + [ring.dual(w)])
        if b:
            boundary[key] = -b
    return Divisor0(n, psi, boundary)


# ---------------------------------------------------------------- degrees


def deg_m04(ring: VirRing, labels: Iterable[int]) -> Fraction:
    """Degree of D_{0,4} on M̄_{0,4}: each ψ_i and each boundary point has degree 1."""
    labels = _normalized(ring, labels)
    if len(labels) != 4:
        raise DivisorError("deg_m04 takes four labels")
    d = divisor0_from_vir(ring, labels)
    return sum(d.psi, Fraction(0)) + sum(d.boundary.values(), Fraction(0))


def deg_m11(ring: VirRing, label: int) -> Fraction:
    """Degree of D_{1,1}(W) as a multiple of λ (δ_irr = 12λ on M̄_{1,1})."""
    d = divisor1_from_vir(ring, [label]).canonical_form()
    return 12 * d.delta_irr


def _as_int(x: Fraction):
    return x.numerator if x.denominator == 1 else x


@lru_cache(maxsize=64)
def _deg04_table(k: int) -> dict[tuple[int, ...], object]:
    ring = VirRing(k)
    table = {}
    for quad in combinations_with_replacement(range(1, k + 1), 4):
        table[quad] = _as_int(deg_m04(ring, quad))
    return table


@lru_cache(maxsize=64)
def _deg11_table(k: int) -> tuple:
    ring = VirRing(k)
    return (0,) + tuple(_as_int(deg_m11(ring, a)) for a in ring.labels)


def _tail_factor(k: int, genus: int, legs: int, labels: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    """Channel tuple at the legs -> rank of the fixed tail."""
    if genus == 0 and legs == 1:
        return {(w,): m for w, m in fusion_vector(k, labels).items()} if labels else {}
    out = {}
    for chans in product(range(1, k + 1), repeat=legs):
        r = rank_any(k, genus, labels + chans)
        if r:
            out[chans] = r
    return out


def vir_intersection_fcurve(ring: VirRing, labels: Iterable[int], f: FCurve) -> Fraction:
    """Intersection of the coinvariant divisor with an F-curve, through factorization.

    Type-1 curves (moving elliptic tail) are measured in units of λ on M̄_{1,1}.
    """
    labels = _normalized(ring, labels)
    if len(labels) != f.n:
        raise DivisorError("label count does not match the curve")
    k = ring.k
    if f.elliptic:
        deg11 = _deg11_table(k)
        total = 0
        for w in ring.labels:
            r = rank_any(k, f.genus - 1, labels + (w,))
            if r:
                total += r * deg11[w]
        return Fraction(total)
    if sum(t.legs for t in f.tails) + 2 * f.loops != 4:
        raise DivisorError("moving component must have four legs")
    factors = []
    for t in f.tails:
        sub = tuple(labels[p - 1] for p in t.points)
        factors.append(_tail_factor(k, t.genus, t.legs, sub))
    for _ in range(f.loops):
        factors.append({(w, w): 1 for w in ring.labels})
    deg = _deg04_table(k)
    total = 0
    for combo in product(*(fac.items() for fac in factors)):
        chans = ()
        weight = 1
        for ch, r in combo:
            chans += ch
            weight *= r
        dv = deg[tuple(sorted(chans))]
        if dv:
            total += weight * dv
    return Fraction(total)
