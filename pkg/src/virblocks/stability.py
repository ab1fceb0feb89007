"""Critical levels, stable divisors, allowed channels and difference divisors.

Module indices here are raw: a tuple entry a stands for W_a of Vir_{2,2k+1}
with 1 <= a <= 2k, so its parity is meaningful.  Normalization to 1..k only
happens when a divisor is actually built.
"""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .divclass import (
    Divisor0,
    boundary_keys0,
    divisor0_from_cyclic,
    divisor0_from_vir,
    enumerate_fcurves0,
    fingerprint0,
)
from .fusion import CyclicRing, VirRing, fusion_vector, multi_fusion_raw, vacuum_multiplicity
from .positivity import PositivityReport, check_effectivity, report_from_values


@dataclass(frozen=True)
class TupleSpec:
    a: tuple[int, ...]

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        if not a:
            raise ValueError("a tuple needs at least one entry")
        if any(x < 1 for x in a):
            raise ValueError("module indices are positive")
        object.__setattr__(self, "a", a)

    @classmethod
    def of(cls, labels: Iterable[int]) -> TupleSpec:
        return cls(tuple(labels))

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def weight(self) -> int:
        return sum(x - 1 for x in self.a)

    @property
    def parity(self) -> int:
        return self.weight % 2

    def check_level(self, k: int) -> None:
        if k < 2:
            raise ValueError("k must be at least 2")
        if any(x > 2 * k for x in self.a):
            raise ValueError(f"indices must be at most 2k = {2 * k}")


def critical_level(t: TupleSpec) -> int:
    return -(-t.weight // 2) + 1


def min_level(t: TupleSpec) -> int:
    """Smallest k >= 2 at which every raw index is admissible."""
    return max(2, -(-max(t.a) // 2))


def allowed_channels(k: int, labels: Iterable[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """M_k(a_1..a_n) as (raw indices, normalized labels), both sorted."""
    t = TupleSpec.of(labels)
    t.check_level(k)
    ring = VirRing(k)
    present = fusion_vector(k, tuple(ring.normalize(a) for a in t.a))
    raw = tuple(b for b in range(1, 2 * k + 1) if (t.weight + b - 1) % 2 == 0 and present.get(ring.normalize(b), 0) >= 1)
    return raw, tuple(sorted({ring.normalize(b) for b in raw}))


def vir_divisor(t: TupleSpec, k: int) -> Divisor0:
    t.check_level(k)
    return divisor0_from_vir(VirRing(k), t.a)


def stable_divisor(t: TupleSpec) -> Divisor0:
    if t.n < 4:
        raise ValueError("stable divisors need n >= 4")
    if all(x == 1 for x in t.a):
        return Divisor0(t.n)
    k = max(critical_level(t), min_level(t))
    d = vir_divisor(t, k)
    if fingerprint0(d) != fingerprint0(vir_divisor(t, k + 1)):
        raise AssertionError(f"divisor of {t.a} changes between k={k} and k={k + 1}")
    if t.parity and any(fingerprint0(d)):
        raise AssertionError(f"odd tuple {t.a} has a nonzero stable divisor")
    return Divisor0(t.n) if t.parity else d


@dataclass(frozen=True)
class StabilizationReport:
    a: tuple[int, ...]
    parity: int
    level: int
    ks: tuple[int, ...]
    agree: bool
    k_first_stable: int | None
    zero: bool

    def row(self) -> list:
        return [" ".join(map(str, self.a)), self.parity, self.level,
                "" if self.k_first_stable is None else self.k_first_stable, int(self.zero)]


CSV_COLUMNS = ["tuple", "parity", "l", "k_first_stable", "zero"]


def check_stabilization(t: TupleSpec, k_lo: int, k_hi: int) -> StabilizationReport:
    """Compare fingerprints for k in [max(k_lo, l), k_hi]; also find the first k from which they stay fixed."""
    level = critical_level(t)
    start = max(k_lo, level, min_level(t))
    ks = tuple(range(start, k_hi + 1))
    fps = {k: fingerprint0(vir_divisor(t, k)) for k in ks}
    agree = len({fps[k] for k in ks}) <= 1
    first = None
    zero = False
    if ks:
        ref = fps[ks[0]]
        zero = not any(ref)
        first = ks[0]
        k = ks[0] - 1
        while k >= min_level(t) and fingerprint0(vir_divisor(t, k)) == ref:
            first = k
            k -= 1
    return StabilizationReport(t.a, t.parity, level, ks, agree, first if agree else None, zero)


def stabilization_csv(reports: Iterable[StabilizationReport]) -> str:
    buf = io.StringIO()
    buf.write("# schema: v1\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()


def difference_divisor(t: TupleSpec, k: int) -> Divisor0:
    """D(k) - D(k+1) for even tuples, D(k+1) - D(k) for odd ones."""
    lo, hi = vir_divisor(t, k), vir_divisor(t, k + 1)
    return lo - hi if t.parity == 0 else hi - lo


def difference_hypotheses(t: TupleSpec, k: int) -> bool:
    """Whether the difference theorems guarantee F-nefness for (t, k)."""
    if t.parity == 0:
        return all(a <= 2 * k for a in t.a)
    return t.n >= 5 and all(a > 1 for a in t.a) and critical_level(t) - 3 <= k


def check_difference_fnef(t: TupleSpec, k: int) -> PositivityReport:
    d = difference_divisor(t, k)
    values = {f.label(): v for f, v in zip(enumerate_fcurves0(t.n), fingerprint0(d))}
    sign = "D(k)-D(k+1)" if t.parity == 0 else "D(k+1)-D(k)"
    cid = f"{sign} for a=({','.join(map(str, t.a))}), k={k}"
    return report_from_values(cid, values, zero=not any(values.values()))


# ---------------------------------------------------------------- strict effectivity at the critical level


@dataclass(frozen=True)
class SteffCertificate:
    a: tuple[int, ...]
    k: int
    rank: int
    coefficients: dict[tuple[int, ...], Fraction]
    cyclic_zero: bool

    @property
    def zero(self) -> bool:
        return self.rank <= 1

    @property
    def positive(self) -> bool:
        return all(v > 0 for v in self.coefficients.values())


def steff_level(t: TupleSpec) -> int:
    """The level k with 2k - 1 = Σ(a_i - 1) + 1."""
    if t.parity:
        raise ValueError("needs even Σ(a_i - 1)")
    return t.weight // 2 + 1


def steff_certificate(t: TupleSpec) -> SteffCertificate:
    """Positive boundary expression of -D at level k = Σ(a_i-1)/2 + 1.

    With s_I = Σ_{i∈I}(a_i-1) and m_I(b) the multiplicity of raw W_b in ⊗_{i∈I} W_{a_i}
    (b in the parity class of s_I + 1), the coefficient of δ_{0,I} is

        (1/4k) [ r s_I (2k-2-s_I) - Σ_b (b-1)(2k-b-1) m_I(b) m_{I^c}(b) ].

    It comes from subtracting the vanishing divisor of the cyclic ring Z/(2k-2)
    with labels a_i - 1 from the Virasoro divisor.
    """
    if any(a < 2 for a in t.a) or t.n < 4:
        raise ValueError("needs n >= 4 and all a_i >= 2")
    k = steff_level(t)
    t.check_level(k)
    n = t.n
    r = vacuum_multiplicity(k, tuple(VirRing(k).normalize(a) for a in t.a))
    cyc = divisor0_from_cyclic(CyclicRing(2 * k - 2), [a - 1 for a in t.a])
    cyclic_zero = not any(fingerprint0(cyc))
    coeffs: dict[tuple[int, ...], Fraction] = {}
    d = divisor0_from_vir(VirRing(k), t.a)
    if r >= 2:
        for key in boundary_keys0(n):
            inside = [t.a[p - 1] for p in key]
            outside = [t.a[p - 1] for p in range(1, n + 1) if p not in key]
            s = sum(a - 1 for a in inside)
            mi = _raw_multiplicities(k, inside)
            mo = _raw_multiplicities(k, outside)
            b_term = sum(((b - 1) * (2 * k - b - 1) * m * mo.get(b, 0) for b, m in mi.items()), 0)
            coeffs[key] = Fraction(r * s * (2 * k - 2 - s) - b_term, 4 * k)
        if fingerprint0(Divisor0(n, None, coeffs)) != fingerprint0(-d):
            raise AssertionError(f"critical-level expression does not reproduce -D for {t.a}")
    elif any(fingerprint0(d)):
        raise AssertionError("rank <= 1 but the divisor is nonzero")
    return SteffCertificate(t.a, k, r, coeffs, cyclic_zero)


def _raw_multiplicities(k: int, labels: Sequence[int]) -> dict[int, int]:
    """Multiplicities of raw W_b (b in the parity class of Σ(a-1)+1, 1 <= b <= 2k) in the product."""
    return dict(multi_fusion_raw(VirRing(k), labels))


def stable_effectivity(t: TupleSpec) -> str:
    """Status of the strict effectivity check of -D for a stable divisor."""
    d = stable_divisor(t)
    if not any(fingerprint0(d)):
        return "Zero"
    return check_effectivity(d, strict=True).status
