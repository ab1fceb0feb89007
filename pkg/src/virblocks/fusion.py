"""Fusion rings of Vir_{2,2k+1} and of L_1(sl_m), with conformal-block ranks.

Labels of a Virasoro ring are the integers 1..k (label 1 is the vacuum V).
Raw indices in [1, 2k] are accepted everywhere and normalized through
i -> min(i, 2k+1-i).  The raw-index fold (``multi_fusion_raw``) keeps the
representative in the parity class of sum(a_i - 1) + 1, which is the form in
which fusion outputs do not depend on k.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product


class FusionError(ValueError):
    """Invalid ring, label or rank request."""


class ModuleVector(Mapping):
    """Immutable multiset of labels; missing labels have multiplicity 0."""

    __slots__ = ("_data",)

    def __init__(self, data: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = data.items() if isinstance(data, Mapping) else data
        clean: dict[int, int] = {}
        for key, mult in items:
            if mult < 0:
                raise FusionError(f"negative multiplicity {mult} for label {key}")
            if mult:
                clean[key] = clean.get(key, 0) + mult
        self._data = dict(sorted(clean.items()))

    def __getitem__(self, key: int) -> int:
        return self._data.get(key, 0)

    def __contains__(self, key: object) -> bool:
        return key in self._data

    def __iter__(self) -> Iterator[int]:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ModuleVector):
            return self._data == other._data
        if isinstance(other, Mapping):
            return self._data == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._data.items()))

    def __repr__(self) -> str:
        return f"ModuleVector({self._data})"

    def total(self) -> int:
        return sum(self._data.values())


@dataclass(frozen=True)
class VirRing:
    """Fusion ring of Vir_{2,2k+1}; k >= 2."""

    k: int

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 2:
            raise FusionError(f"Vir_{{2,2k+1}} needs an integer k >= 2, got {self.k!r}")

    @property
    def labels(self) -> range:
        return range(1, self.k + 1)

    def check_raw(self, i: int) -> int:
        if not isinstance(i, int) or not 1 <= i <= 2 * self.k:
            raise FusionError(f"label {i!r} outside [1, {2 * self.k}] for k={self.k}")
        return i

    def normalize(self, i: int) -> int:
        self.check_raw(i)
        return min(i, 2 * self.k + 1 - i)

    def dual(self, i: int) -> int:
        return self.normalize(i)


@dataclass(frozen=True)
class CyclicRing:
    """Fusion ring of L_1(sl_m): labels 0..m-1 under addition mod m."""

    m: int

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or self.m < 2:
            raise FusionError(f"cyclic ring needs m >= 2, got {self.m!r}")

    @property
    def labels(self) -> range:
        return range(self.m)

    def check(self, i: int) -> int:
        if not isinstance(i, int) or not 0 <= i < self.m:
            raise FusionError(f"label {i!r} outside [0, {self.m})")
        return i

    def product(self, i: int, j: int) -> int:
        return (self.check(i) + self.check(j)) % self.m

    def dual(self, i: int) -> int:
        return (-self.check(i)) % self.m


# ---------------------------------------------------------------- Virasoro


def _raw_pair(k: int, a: int, b: int) -> range:
    top = min(a + b, 4 * k + 2 - a - b) - 1
    return range(abs(a - b) + 1, top + 1, 2)


@lru_cache(maxsize=1 << 16)
def _fold_raw(k: int, raw: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
    state = {raw[0]: 1}
    for a in raw[1:]:
        nxt: Counter[int] = Counter()
        for j, mult in state.items():
            for i in _raw_pair(k, j, a):
                nxt[i] += mult
        state = nxt
    return tuple(sorted((i, m) for i, m in state.items() if m))


@lru_cache(maxsize=1 << 18)
def _fold_normalized(k: int, labels: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
    out: Counter[int] = Counter()
    for i, mult in _fold_raw(k, labels):
        out[min(i, 2 * k + 1 - i)] += mult
    return tuple(sorted(out.items()))


def fusion_product(ring: VirRing, a: int, b: int) -> ModuleVector:
    """W_a x W_b with normalized output."""
    return multi_fusion(ring, [a, b])


def multi_fusion(ring: VirRing, labels: Iterable[int]) -> ModuleVector:
    labels = [ring.normalize(a) for a in labels]
    if not labels:
        raise FusionError("multi_fusion needs at least one label")
    return ModuleVector(_fold_normalized(ring.k, tuple(sorted(labels))))


def multi_fusion_raw(ring: VirRing, labels: Iterable[int]) -> ModuleVector:
    """Fusion with outputs kept as raw indices in the parity class of sum(a_i - 1) + 1.

    The inputs are taken as given (raw indices); the parity class depends on
    the representatives chosen for them.
    """
    raw = [ring.check_raw(a) for a in labels]
    if not raw:
        raise FusionError("multi_fusion_raw needs at least one label")
    return ModuleVector(_fold_raw(ring.k, tuple(sorted(raw))))


def fusion_vector(k: int, labels: tuple[int, ...]) -> dict[int, int]:
    """Cached normalized fusion of already-normalized labels (internal fast path)."""
    return dict(_fold_normalized(k, tuple(sorted(labels))))


def vacuum_multiplicity(k: int, labels: Iterable[int]) -> int:
    """Coefficient of V in the product of normalized labels; any length >= 1.

    With one label this is [a == 1]; with two it is [a == b].  These are the
    unstable cases that show up as singleton blocks and self-glued legs.
    """
    labels = tuple(sorted(labels))
    if not labels:
        return 1
    for i, mult in _fold_normalized(k, labels):
        if i == 1:
            return mult
    return 0


@lru_cache(maxsize=1 << 18)
def _rank_h(k: int, genus: int, labels: tuple[int, ...]) -> int:
    if genus == 0:
        return vacuum_multiplicity(k, labels)
    return sum(
        _rank_h(k, genus - 1, tuple(sorted(labels + (b, b)))) for b in range(1, k + 1)
    )


def rank_any(k: int, genus: int, labels: Iterable[int]) -> int:
    """Rank on a connected curve of arithmetic genus ``genus``; no stability check."""
    return _rank_h(k, genus, tuple(sorted(labels)))


def rank_genus0(ring: VirRing, labels: Iterable[int]) -> int:
    labels = [ring.normalize(a) for a in labels]
    if len(labels) < 3:
        raise FusionError("genus-0 ranks need n >= 3")
    return vacuum_multiplicity(ring.k, labels)


def rank_genus1(ring: VirRing, labels: Iterable[int]) -> int:
    labels = [ring.normalize(a) for a in labels]
    if not labels:
        raise FusionError("genus-1 ranks need n >= 1")
    return rank_any(ring.k, 1, labels)


def rank_genus_g(ring: VirRing, g: int, labels: Iterable[int], cap: int = 3) -> int:
    labels = [ring.normalize(a) for a in labels]
    if g < 0:
        raise FusionError("genus must be nonnegative")
    if g > cap:
        raise FusionError(f"genus {g} exceeds the enumeration cap {cap}")
    if 2 * g - 2 + len(labels) <= 0:
        raise FusionError(f"(g, n) = ({g}, {len(labels)}) is not stable")
    if g == 0 and len(labels) < 3:
        raise FusionError("genus-0 ranks need n >= 3")
    return rank_any(ring.k, g, labels)


def rank_genus_g_bruteforce(ring: VirRing, g: int, labels: Iterable[int]) -> int:
    """Direct sum over all k^g handle labelings (reference implementation)."""
    labels = [ring.normalize(a) for a in labels]
    total = 0
    for handles in product(ring.labels, repeat=g):
        extra = [b for b in handles for _ in range(2)]
        total += vacuum_multiplicity(ring.k, labels + extra)
    return total


def conformal_weight(ring: VirRing, a: int) -> Fraction:
    ring.check_raw(a)
    k = ring.k
    return Fraction(-(2 * k - a) * (a - 1), 2 * (2 * k + 1))


def normalized_weight(ring: VirRing, a: int) -> int:
    ring.check_raw(a)
    return (a - 1) * (2 * ring.k - a)


def central_charge_of_level(k: int) -> Fraction:
    """c_k for any k >= 1 (k = 1 is the trivial VOA with c = 0)."""
    if k < 1:
        raise FusionError("k must be positive")
    return Fraction(-2 * (k - 1) * (6 * k - 1), 2 * k + 1)


def central_charge(ring: VirRing) -> Fraction:
    return central_charge_of_level(ring.k)


def fusion_support_bound(ring: VirRing, labels: Iterable[int]) -> int:
    """Largest raw index that can occur in the product: sum(a_j) - (n - 1)."""
    labels = [ring.check_raw(a) for a in labels]
    if not labels:
        raise FusionError("need at least one label")
    return sum(labels) - (len(labels) - 1)


# ---------------------------------------------------------------- cyclic


def cyclic_fusion(ring: CyclicRing, labels: Iterable[int]) -> int:
    """Multiplicity of U_0 in the product."""
    total = sum(ring.check(i) for i in labels)
    return 1 if total % ring.m == 0 else 0


def cyclic_weight(ring: CyclicRing, i: int) -> Fraction:
    ring.check(i)
    return Fraction(i * (ring.m - i), 2 * ring.m)


def cyclic_central_charge(ring: CyclicRing) -> int:
    return ring.m - 1
