"""F-curves: enumeration, genus-0 intersection table, fingerprints.

An F-curve is described by its moving component and what hangs off it.
Either the moving component is an elliptic tail M̄_{1,1} attached to a fixed
curve of genus g-1 carrying every marked point (``elliptic``), or it is a
4-pointed rational curve whose four legs go to fixed tails or are glued to
each other in pairs (``loops``).  A tail records its marked points, its
arithmetic genus and how many legs of the moving component it receives.
A genus-0 tail with one leg and one point stands for the point lying
directly on the moving component.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product

from .classes import Divisor0, DivisorError, normalize_subset0


@dataclass(frozen=True, order=True)
class Tail:
    points: tuple[int, ...]
    genus: int = 0
    legs: int = 1

    def stable(self) -> bool:
        if self.genus == 0 and self.legs == 1 and len(self.points) == 1:
            return True
        if self.genus == 0 and self.legs == 2 and not self.points:
            return False  # that is a loop, recorded separately
        return 2 * self.genus - 2 + len(self.points) + self.legs > 0


@dataclass(frozen=True)
class FCurve:
    n: int
    genus: int
    tails: tuple[Tail, ...] = ()
    loops: int = 0
    elliptic: bool = False

    @property
    def kind(self) -> str:
        if self.elliptic:
            return "Type1"
        legs = sorted(t.legs for t in self.tails)
        if self.genus == 0:
            return "G0Type6"
        if self.genus == 1:
            if self.loops == 1 or legs == [1, 1, 2]:
                return "G1Type5"
            return "G1Type6"
        return f"G{self.genus}:loops={self.loops},legs={legs}"

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        return tuple(t.points for t in self.tails)

    def label(self) -> str:
        if self.elliptic:
            return "F_1"
        parts = []
        for t in self.tails:
            pts = "{" + ",".join(map(str, t.points)) + "}" if len(t.points) != 1 else str(t.points[0])
            if t.genus or t.legs != 1:
                pts += f"^(g={t.genus},legs={t.legs})"
            parts.append(pts)
        parts += ["loop"] * self.loops
        return "F_" + ";".join(parts)

    def __str__(self) -> str:
        return self.label()


def _canonical(n: int, genus: int, tails, loops: int = 0) -> FCurve:
    return FCurve(n, genus, tuple(sorted(tails)), loops, False)


def fcurve0(n: int, *blocks) -> FCurve:
    """Genus-0 F-curve from four blocks; ints stand for singletons."""
    bl = [tuple(sorted(b)) if not isinstance(b, int) else (b,) for b in blocks]
    if len(bl) != 4 or any(not b for b in bl):
        raise DivisorError("a genus-0 F-curve needs four nonempty blocks")
    if sorted(p for b in bl for p in b) != list(range(1, n + 1)):
        raise DivisorError("blocks must partition [n]")
    return _canonical(n, 0, [Tail(b) for b in bl])


def fcurve1_type1(n: int) -> FCurve:
    return FCurve(n, 1, (), 0, True)


def fcurve1_type5(n: int, i1, i2) -> FCurve:
    """F_5(0,0,I_1,I_2): I_1, I_2 on two legs, the rest on a tail meeting the other two legs."""
    i1, i2 = tuple(sorted(i1)), tuple(sorted(i2))
    if not i1 or not i2 or set(i1) & set(i2):
        raise DivisorError("F_5 blocks must be nonempty and disjoint")
    rest = tuple(p for p in range(1, n + 1) if p not in i1 and p not in i2)
    if rest:
        return _canonical(n, 1, [Tail(i1), Tail(i2), Tail(rest, 0, 2)])
    return _canonical(n, 1, [Tail(i1), Tail(i2)], loops=1)


def fcurve1_type6(n: int, genus_block, *blocks) -> FCurve:
    """F_6 with one genus-1 block (possibly empty) and three nonempty genus-0 blocks."""
    gb = tuple(sorted(genus_block))
    bl = [tuple(sorted(b)) if not isinstance(b, int) else (b,) for b in blocks]
    if len(bl) != 3 or any(not b for b in bl):
        raise DivisorError("need three nonempty genus-0 blocks")
    if sorted(list(gb) + [p for b in bl for p in b]) != list(range(1, n + 1)):
        raise DivisorError("blocks must partition [n]")
    return _canonical(n, 1, [Tail(gb, 1, 1)] + [Tail(b) for b in bl])


def set_partitions(items: list[int], blocks: int):
    """Partitions of items into exactly ``blocks`` nonempty blocks, blocks ordered by minimum."""
    n = len(items)

    def rec(i, assign, used):
        if n - i < blocks - used:
            return
        if i == n:
            if used == blocks:
                parts = [[] for _ in range(blocks)]
                for x, b in zip(items, assign):
                    parts[b].append(x)
                yield tuple(tuple(p) for p in parts)
            return
        for b in range(min(used + 1, blocks)):
            assign.append(b)
            yield from rec(i + 1, assign, max(used, b + 1))
            assign.pop()

    yield from rec(0, [], 0)


@lru_cache(maxsize=None)
def enumerate_fcurves0(n: int) -> tuple[FCurve, ...]:
    if n < 4:
        raise DivisorError("M_0,n has F-curves only for n >= 4")
    parts = sorted(set_partitions(list(range(1, n + 1)), 4))
    return tuple(FCurve(n, 0, tuple(Tail(b) for b in p)) for p in parts)


@lru_cache(maxsize=None)
def enumerate_fcurves1(n: int) -> tuple[FCurve, ...]:
    if n < 1:
        raise DivisorError("M_1,n needs n >= 1")
    pts = list(range(1, n + 1))
    out = [fcurve1_type1(n)]
    type5 = set()
    for assign in product(range(3), repeat=n):
        i1 = tuple(p for p, a in zip(pts, assign) if a == 0)
        i2 = tuple(p for p, a in zip(pts, assign) if a == 1)
        if i1 and i2 and i1 < i2:
            type5.add(fcurve1_type5(n, i1, i2))
    out += sorted(type5, key=lambda f: f.tails)
    type6 = []
    for size in range(0, n - 2):
        for gb in combinations(pts, size):
            rest = [p for p in pts if p not in gb]
            for part in sorted(set_partitions(rest, 3)):
                type6.append(fcurve1_type6(n, gb, *part))
    out += sorted(type6, key=lambda f: f.tails)
    return tuple(out)


def _integer_partitions(total: int, max_part: int | None = None):
    if max_part is None:
        max_part = total
    if total == 0:
        yield ()
        return
    for first in range(min(total, max_part), 0, -1):
        for rest in _integer_partitions(total - first, first):
            yield (first,) + rest


def _genus_splits(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _genus_splits(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def enumerate_fcurves(genus: int, n: int) -> tuple[FCurve, ...]:
    """All F-curve types of M̄_{genus,n}, by brute force over leg groupings.

    Agrees with enumerate_fcurves0/1 as sets; used directly for genus >= 2.
    """
    if 2 * genus - 2 + n <= 0:
        raise DivisorError("unstable (g, n)")
    found: set[FCurve] = set()
    if genus >= 1:
        found.add(FCurve(n, genus, (), 0, True))
    pts = list(range(1, n + 1))
    for loops in range(3):
        for legs in _integer_partitions(4 - 2 * loops):
            spare = genus - loops - sum(m - 1 for m in legs)
            if spare < 0:
                continue
            for genera in _genus_splits(spare, len(legs)):
                for assign in product(range(len(legs)), repeat=n):
                    tails = []
                    for t, (m, h) in enumerate(zip(legs, genera)):
                        tails.append(Tail(tuple(p for p, a in zip(pts, assign) if a == t), h, m))
                    if all(t.stable() for t in tails):
                        found.add(_canonical(n, genus, tails, loops))
    return tuple(sorted(found, key=lambda f: (not f.elliptic, f.loops, f.tails)))


# ---------------------------------------------------------------- pairing


@lru_cache(maxsize=None)
def _pairing_table0(n: int):
    """Per F-curve: (ψ indices with value 1, {boundary key: ±1})."""
    table = []
    full = set(range(1, n + 1))
    for f in enumerate_fcurves0(n):
        blocks = [set(b) for b in f.blocks]
        psi = tuple(next(iter(b)) - 1 for b in blocks if len(b) == 1)
        bnd = {}
        for b in blocks:
            if len(b) >= 2:
                bnd[normalize_subset0(n, b)] = -1
        for a, b in ((0, 1), (0, 2), (0, 3)):
            other = [c for c in range(4) if c not in (a, b)]
            union = blocks[a] | blocks[b]
            assert full - union == blocks[other[0]] | blocks[other[1]]
            bnd[normalize_subset0(n, union)] = 1
        table.append((psi, bnd))
    return tuple(table)


def pair_class_fcurve0(d: Divisor0, f: FCurve) -> Fraction:
    if f.genus != 0 or f.n != d.n:
        raise DivisorError("curve and divisor live on different spaces")
    blocks = [set(b) for b in f.blocks]
    total = Fraction(0)
    for b in blocks:
        if len(b) == 1:
            total += d.psi[next(iter(b)) - 1]
    for key, v in d.boundary.items():
        ks = set(key)
        kc = set(range(1, d.n + 1)) - ks
        if any(ks == b or kc == b for b in blocks):
            total -= v
        elif any(ks == blocks[a] | blocks[b] for a, b in combinations(range(4), 2)):
            total += v
    return total


def fingerprint0(d: Divisor0) -> tuple[Fraction, ...]:
    """Intersections with every F-curve of M̄_{0,n}, in enumerate_fcurves0 order."""
    if d.n < 4:
        return ()
    out = []
    for psi, bnd in _pairing_table0(d.n):
        total = Fraction(0)
        for i in psi:
            total += d.psi[i]
        for key, sign in bnd.items():
            v = d.boundary.get(key)
            if v:
                total += sign * v
        out.append(total)
    return tuple(out)


def fingerprint_pullback0(d: Divisor0) -> tuple[Fraction, ...]:
    """Fingerprint of the pullback of d along forgetting a new point n+1.

    Uses the projection formula: the pushforward of F_{I_1..I_4} is the curve
    with n+1 removed from its block, or zero if {n+1} was a block.
    """
    n = d.n
    index = {f.blocks: idx for idx, f in enumerate(enumerate_fcurves0(n))} if n >= 4 else {}
    fp = fingerprint0(d)
    out = []
    for f in enumerate_fcurves0(n + 1):
        blocks = [tuple(p for p in b if p != n + 1) for b in f.blocks]
        if any(not b for b in blocks):
            out.append(Fraction(0))
        else:
            out.append(fp[index[tuple(sorted(blocks))]])
    return tuple(out)


def same_class0(a: Divisor0, b: Divisor0) -> bool:
    return not any(fingerprint0(a - b))
