"""Divisor classes on M̄_{0,n} and M̄_{1,n} and the linear maps between them."""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from ..rational import fmt, parse

ZERO = Fraction(0)


class DivisorError(ValueError):
    pass


def _key_str(key: tuple[int, ...]) -> str:
    return ",".join(map(str, key))


def _parse_key(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.split(",")) if s else ()


def normalize_subset0(n: int, subset: Iterable[int]) -> tuple[int, ...]:
    """Representative of {I, I^c} not containing n."""
    s = set(subset)
    if not s <= set(range(1, n + 1)):
        raise DivisorError(f"subset {sorted(s)} not inside [1, {n}]")
    if n in s:
        s = set(range(1, n + 1)) - s
    if not 2 <= len(s) <= n - 2:
        raise DivisorError(f"{sorted(s)} does not index a boundary divisor of M_0,{n}")
    return tuple(sorted(s))


@lru_cache(maxsize=None)
def boundary_keys0(n: int) -> tuple[tuple[int, ...], ...]:
    """All normalized boundary keys of M̄_{0,n}, sorted by (size, tuple)."""
    pts = range(1, n)
    keys = [c for size in range(2, n - 1) for c in combinations(pts, size)]
    return tuple(keys)


class Divisor0:
    """A divisor on M̄_{0,n}: psi coefficients plus normalized boundary coefficients."""

    __slots__ = ("n", "psi", "boundary")

    def __init__(self, n: int, psi: Sequence | None = None, boundary: Mapping | None = None):
        if n < 3:
            raise DivisorError("Divisor0 needs n >= 3")
        psi = [ZERO] * n if psi is None else [Fraction(x) for x in psi]
        if len(psi) != n:
            raise DivisorError("psi vector has the wrong length")
        acc: dict[tuple[int, ...], Fraction] = {}
        for key, val in (boundary or {}).items():
            val = Fraction(val)
            if not val:
                continue
            nk = normalize_subset0(n, key)
            acc[nk] = acc.get(nk, ZERO) + val
        self.n = n
        self.psi = tuple(psi)
        self.boundary = {k: v for k, v in sorted(acc.items()) if v}

    def coefficient(self, subset: Iterable[int]) -> Fraction:
        return self.boundary.get(normalize_subset0(self.n, subset), ZERO)

    def _check(self, other: Divisor0) -> None:
        if not isinstance(other, Divisor0) or other.n != self.n:
            raise DivisorError("divisors live on different spaces")

    def __add__(self, other: Divisor0) -> Divisor0:
        self._check(other)
        b = dict(self.boundary)
        for k, v in other.boundary.items():
            b[k] = b.get(k, ZERO) + v
        return Divisor0(self.n, [x + y for x, y in zip(self.psi, other.psi)], b)

    def __neg__(self) -> Divisor0:
        return self * -1

    def __sub__(self, other: Divisor0) -> Divisor0:
        return self + (-other)

    def __mul__(self, c) -> Divisor0:
        c = Fraction(c)
        return Divisor0(self.n, [c * x for x in self.psi], {k: c * v for k, v in self.boundary.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        """Equality of the stored expressions (not of classes; see fingerprint0)."""
        if not isinstance(other, Divisor0):
            return NotImplemented
        return self.n == other.n and self.psi == other.psi and self.boundary == other.boundary

    def __hash__(self):
        return hash((self.n, self.psi, tuple(self.boundary.items())))

    def is_zero_expression(self) -> bool:
        return not any(self.psi) and not self.boundary

    def __repr__(self) -> str:
        return f"Divisor0(n={self.n}, psi={[fmt(x) for x in self.psi]}, boundary={ {_key_str(k): fmt(v) for k, v in self.boundary.items()} })"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "psi": [fmt(x) for x in self.psi],
            "boundary": {_key_str(k): fmt(v) for k, v in self.boundary.items()},
        }

    @classmethod
    def from_json(cls, data: Mapping | str) -> Divisor0:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            data["n"],
            [parse(x) for x in data["psi"]],
            {_parse_key(k): parse(v) for k, v in data["boundary"].items()},
        )


def boundary0(n: int, subset: Iterable[int], coeff=1) -> Divisor0:
    return Divisor0(n, None, {tuple(subset): coeff})


def psi0(n: int, i: int, coeff=1) -> Divisor0:
    psi = [ZERO] * n
    psi[i - 1] = Fraction(coeff)
    return Divisor0(n, psi)


@lru_cache(maxsize=None)
def _big_average_items(i: int, n: int) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
    rest = [j for j in range(1, n + 1) if j != i]
    den = (n - 1) * (n - 2)
    items = []
    for size in range(1, n - 2):
        coeff = Fraction((n - 1 - size) * (n - 2 - size), den)
        if not coeff:
            continue
        for y in combinations(rest, size):
            items.append((normalize_subset0(n, y + (i,)), coeff))
    return tuple(items)


def big_average(i: int, n: int) -> Divisor0:
    """psi_i rewritten as an average of boundary divisors containing i."""
    if n < 4:
        raise DivisorError("big average needs n >= 4")
    if not 1 <= i <= n:
        raise DivisorError("marked point out of range")
    return Divisor0(n, None, dict(_big_average_items(i, n)))


def standard_form(d: Divisor0) -> dict[tuple[int, ...], Fraction]:
    """Pure boundary expression of d obtained by substituting the big average for each psi."""
    coeffs = dict(d.boundary)
    for i, c in enumerate(d.psi, start=1):
        if not c:
            continue
        for key, w in _big_average_items(i, d.n):
            coeffs[key] = coeffs.get(key, ZERO) + c * w
    return {k: v for k, v in sorted(coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))}


def relabel0(d: Divisor0, mapping: Mapping[int, int] | Sequence[int]) -> Divisor0:
    """Push marked point i to mapping[i] (a bijection of [n]); sequences are 1-indexed via position."""
    n = d.n
    if not isinstance(mapping, Mapping):
        mapping = {i + 1: p for i, p in enumerate(mapping)}
    if sorted(mapping.values()) != list(range(1, n + 1)) or sorted(mapping) != list(range(1, n + 1)):
        raise DivisorError("relabel0 needs a permutation of the marked points")
    psi = [ZERO] * n
    for i, c in enumerate(d.psi, start=1):
        psi[mapping[i] - 1] = c
    return Divisor0(n, psi, {tuple(mapping[j] for j in key): v for key, v in d.boundary.items()})


def pullback0(d: Divisor0) -> Divisor0:
    """Pullback along the map forgetting a new last point n+1."""
    n = d.n
    new = n + 1
    boundary: dict[tuple[int, ...], Fraction] = {}

    def add(key, val):
        nk = normalize_subset0(new, key)
        boundary[nk] = boundary.get(nk, ZERO) + val

    for i, c in enumerate(d.psi, start=1):
        if c:
            add((i, new), -c)
    for key, v in d.boundary.items():
        add(key, v)
        add(key + (new,), v)
    return Divisor0(new, list(d.psi) + [ZERO], boundary)


def restrict_boundary0(d: Divisor0, subset: Iterable[int]) -> tuple[Divisor0, Divisor0]:
    """Restriction of d to Δ_{0,I} ≅ M̄_{0,I∪{x}} × M̄_{0,I^c∪{y}}.

    Factor points are the sorted elements of I (resp. I^c) followed by the
    attaching point.  Each factor is returned as a divisor class on its own
    moduli space.
    """
    n = d.n
    key = normalize_subset0(n, subset)
    parts = (set(key), set(range(1, n + 1)) - set(key))
    pos = []
    for part in parts:
        pos.append({p: idx for idx, p in enumerate(sorted(part), start=1)})
    sizes = [len(p) + 1 for p in parts]
    psis = [[ZERO] * s for s in sizes]
    bounds: list[dict] = [{}, {}]

    for i, c in enumerate(d.psi, start=1):
        side = 0 if i in parts[0] else 1
        psis[side][pos[side][i] - 1] += c
    for j, v in d.boundary.items():
        js = set(j)
        jc = set(range(1, n + 1)) - js
        if js == parts[0] or js == parts[1]:
            psis[0][-1] -= v
            psis[1][-1] -= v
            continue
        for side in (0, 1):
            part = parts[side]
            hit = None
            if js < part:
                hit = js
            elif jc < part:
                hit = jc
            if hit is not None:
                loc = tuple(sorted(pos[side][p] for p in hit))
                bounds[side][loc] = bounds[side].get(loc, ZERO) + v
                break
    return tuple(Divisor0(sizes[s], psis[s], bounds[s]) for s in (0, 1))


# ---------------------------------------------------------------- genus one


@lru_cache(maxsize=None)
def pic1_basis(n: int) -> tuple[tuple[int, ...], ...]:
    """Subsets S ⊆ [n], |S| >= 2, in lexicographic order; δ_irr precedes them."""
    subsets = [c for size in range(2, n + 1) for c in combinations(range(1, n + 1), size)]
    return tuple(sorted(subsets))


class Divisor1:
    """A divisor on M̄_{1,n} in terms of λ, δ_irr, ψ_i and δ_{0,S} (|S| >= 2)."""

    __slots__ = ("n", "lam", "delta_irr", "psi", "boundary")

    def __init__(self, n: int, lam=0, delta_irr=0, psi: Sequence | None = None, boundary: Mapping | None = None):
        if n < 1:
            raise DivisorError("Divisor1 needs n >= 1")
        psi = [ZERO] * n if psi is None else [Fraction(x) for x in psi]
        if len(psi) != n:
            raise DivisorError("psi vector has the wrong length")
        acc: dict[tuple[int, ...], Fraction] = {}
        for key, val in (boundary or {}).items():
            val = Fraction(val)
            if not val:
                continue
            s = tuple(sorted(set(key)))
            if len(s) < 2 or not set(s) <= set(range(1, n + 1)):
                raise DivisorError(f"{key} does not index a boundary divisor of M_1,{n}")
            acc[s] = acc.get(s, ZERO) + val
        self.n = n
        self.lam = Fraction(lam)
        self.delta_irr = Fraction(delta_irr)
        self.psi = tuple(psi)
        self.boundary = {k: v for k, v in sorted(acc.items()) if v}

    def _check(self, other):
        if not isinstance(other, Divisor1) or other.n != self.n:
            raise DivisorError("divisors live on different spaces")

    def __add__(self, other: Divisor1) -> Divisor1:
        self._check(other)
        b = dict(self.boundary)
        for k, v in other.boundary.items():
            b[k] = b.get(k, ZERO) + v
        return Divisor1(
            self.n,
            self.lam + other.lam,
            self.delta_irr + other.delta_irr,
            [x + y for x, y in zip(self.psi, other.psi)],
            b,
        )

    def __mul__(self, c) -> Divisor1:
        c = Fraction(c)
        return Divisor1(
            self.n, c * self.lam, c * self.delta_irr, [c * x for x in self.psi],
            {k: c * v for k, v in self.boundary.items()},
        )

    __rmul__ = __mul__

    def __neg__(self) -> Divisor1:
        return self * -1

    def __sub__(self, other: Divisor1) -> Divisor1:
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Divisor1):
            return NotImplemented
        return (self.n, self.lam, self.delta_irr, self.psi, self.boundary) == (
            other.n, other.lam, other.delta_irr, other.psi, other.boundary)

    def __hash__(self):
        return hash((self.n, self.lam, self.delta_irr, self.psi, tuple(self.boundary.items())))

    def __repr__(self) -> str:
        return f"Divisor1({json.dumps(self.to_json())})"

    def canonical_form(self) -> Divisor1:
        """Eliminate λ (12λ = δ_irr) and each ψ_p (12ψ_p = δ_irr + 12Σ_{p∈S} δ_{0,S})."""
        irr = self.delta_irr + self.lam / 12
        b = dict(self.boundary)
        for p, c in enumerate(self.psi, start=1):
            if not c:
                continue
            irr += c / 12
            for s in pic1_basis(self.n):
                if p in s:
                    b[s] = b.get(s, ZERO) + c
        return Divisor1(self.n, 0, irr, None, b)

    def is_canonical(self) -> bool:
        return not self.lam and not any(self.psi)

    def coordinates(self) -> list[Fraction]:
        c = self.canonical_form()
        return [c.delta_irr] + [c.boundary.get(s, ZERO) for s in pic1_basis(self.n)]

    @classmethod
    def from_coordinates(cls, n: int, coords: Sequence) -> Divisor1:
        basis = pic1_basis(n)
        if len(coords) != len(basis) + 1:
            raise DivisorError(f"expected {len(basis) + 1} coordinates")
        return cls(n, 0, coords[0], None, dict(zip(basis, coords[1:])))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "lambda": fmt(self.lam),
            "delta_irr": fmt(self.delta_irr),
            "psi": [fmt(x) for x in self.psi],
            "boundary": {_key_str(k): fmt(v) for k, v in self.boundary.items()},
        }

    @classmethod
    def from_json(cls, data: Mapping | str) -> Divisor1:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            data["n"], parse(data["lambda"]), parse(data["delta_irr"]),
            [parse(x) for x in data["psi"]],
            {_parse_key(k): parse(v) for k, v in data["boundary"].items()},
        )


def lambda1(n: int, coeff=1) -> Divisor1:
    return Divisor1(n, lam=coeff)


def psi1(n: int, i: int, coeff=1) -> Divisor1:
    psi = [ZERO] * n
    psi[i - 1] = Fraction(coeff)
    return Divisor1(n, psi=psi)


def pullback_pi(d: Divisor1, i: int) -> Divisor1:
    """Pullback along M̄_{1,n+1} -> M̄_{1,n} forgetting the new point i.

    Old points p >= i are renumbered p + 1.
    """
    n = d.n
    if not 1 <= i <= n + 1:
        raise DivisorError("inserted point out of range")
    c = d.canonical_form()
    shift = {p: (p if p < i else p + 1) for p in range(1, n + 1)}
    b: dict[tuple[int, ...], Fraction] = {}
    for s, v in c.boundary.items():
        t = tuple(shift[p] for p in s)
        b[t] = b.get(t, ZERO) + v
        t2 = tuple(sorted(t + (i,)))
        b[t2] = b.get(t2, ZERO) + v
    return Divisor1(n + 1, 0, c.delta_irr, None, b)


def restrict_fi(d: Divisor1, i: int) -> Divisor1:
    """Restriction to Δ_{0,{i,n}} ≅ M̄_{1,([n-1]∖{i})∪{p}}.

    The points of [n-1]∖{i} keep their order and become 1..n-2; the node p
    becomes point n-1.  The result is returned in canonical form.
    """
    n = d.n
    if n < 2 or not 1 <= i <= n - 1:
        raise DivisorError("restrict_fi needs 1 <= i <= n-1")
    c = d.canonical_form()
    keep = [q for q in range(1, n) if q != i]
    pos = {q: idx for idx, q in enumerate(keep, start=1)}
    node = n - 1
    pair = {i, n}
    psi = [ZERO] * (n - 1)
    b: dict[tuple[int, ...], Fraction] = {}
    for s, v in c.boundary.items():
        ss = set(s)
        if ss == pair:
            psi[node - 1] -= v
        elif pair <= ss:
            t = tuple(sorted([pos[q] for q in ss - pair] + [node]))
            b[t] = b.get(t, ZERO) + v
        elif not (pair & ss):
            t = tuple(sorted(pos[q] for q in ss))
            b[t] = b.get(t, ZERO) + v
    return Divisor1(n - 1, 0, c.delta_irr, psi, b).canonical_form()
