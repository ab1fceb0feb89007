"""Linear algebra on Pic(M̄_{1,n}): the T functional, the Vir_5 basis and contraction kernels.

Coordinates are canonical: δ_irr first, then δ_{0,S} for |S| >= 2 with S in
lexicographic order (see pic1_basis).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb

from .divclass import (
    Divisor1,
    FCurve,
    enumerate_fcurves1,
    fcurve1_type5,
    pic1_basis,
    psi1,
    pullback_pi,
    restrict_fi,
    divisor1_from_vir,
    vir_intersection_fcurve,
)
from .fusion import VirRing
from .linalg import inverse, matvec, nullspace, rank, rank_mod_p, solve
from .rational import fmt

BASIS_CAP = 9
VIR5 = VirRing(2)


@dataclass(frozen=True)
class Pic1Coordinates:
    n: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(Fraction(x) for x in self.coeffs)
        if len(coeffs) != 2 ** self.n - self.n:
            raise ValueError(f"expected {2 ** self.n - self.n} coordinates, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def of(cls, d: Divisor1) -> Pic1Coordinates:
        return cls(d.n, tuple(d.coordinates()))

    def divisor(self) -> Divisor1:
        return Divisor1.from_coordinates(self.n, self.coeffs)


def dimension(n: int) -> int:
    return 2 ** n - n


def t_functional(c: Pic1Coordinates | Divisor1) -> Fraction:
    if isinstance(c, Divisor1):
        c = Pic1Coordinates.of(c)
    return sum(((-1) ** len(s) * v for s, v in zip(pic1_basis(c.n), c.coeffs[1:])), Fraction(0))


def fibonacci(m: int) -> int:
    a, b = 0, 1
    for _ in range(m):
        a, b = b, a + b
    return a


def fibonacci_identities(n: int) -> dict:
    """Both alternating binomial-Fibonacci sums, summed directly and from their closed forms."""
    first = sum((-1) ** (j + 1) * comb(n, j) * fibonacci(j) * fibonacci(n - j) for j in range(n + 1))
    second = sum((-1) ** (j + 1) * comb(n, j) * fibonacci(j) * fibonacci(n + 2 - j) for j in range(n + 1))
    if n % 2:
        closed = (0, 5 ** ((n - 1) // 2))
    else:
        closed = (2 * 5 ** (n // 2 - 1), 3 * 5 ** (n // 2 - 1))
    return {"n": n, "direct": (first, second), "closed": closed, "ok": (first, second) == closed}


# ---------------------------------------------------------------- Vir_5 basis


def basis_labels(n: int) -> tuple[tuple[int, ...], ...]:
    """Label vectors (1 = V, 2 = W_2) as binary strings in lexicographic order, weight one removed."""
    out = []
    for bits in product((0, 1), repeat=n):
        if sum(bits) != 1:
            out.append(tuple(1 + b for b in bits))
    return tuple(out)


def _check_cap(n: int, cap: int = BASIS_CAP) -> None:
    if not 1 <= n <= cap:
        raise ValueError(f"n={n} outside the basis cap 1..{cap}")


@lru_cache(maxsize=None)
def vir5_basis_matrix(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Rows: canonical coordinates of D_{1,n}(Vir_5, W) for W in basis_labels(n)."""
    _check_cap(n)
    return tuple(tuple(divisor1_from_vir(VIR5, w).coordinates()) for w in basis_labels(n))


def basis_is_invertible(n: int, exact: bool = False) -> bool:
    m = vir5_basis_matrix(n)
    if exact:
        return rank(m) == len(m)
    return rank_mod_p(m) == len(m)


@lru_cache(maxsize=None)
def _inverse(n: int):
    return tuple(tuple(r) for r in inverse(vir5_basis_matrix(n)))


def express_in_vir5_basis(c: Pic1Coordinates | Divisor1) -> list[Fraction]:
    """x with c = Σ_W x_W D_{1,n}(Vir_5, W), W in basis_labels(n)."""
    if isinstance(c, Divisor1):
        c = Pic1Coordinates.of(c)
    m = vir5_basis_matrix(c.n)
    x = solve([list(col) for col in zip(*m)], list(c.coeffs))
    if x is None:
        raise ValueError("not in the span of the basis")
    return x


def from_vir5_basis(n: int, x) -> Pic1Coordinates:
    m = vir5_basis_matrix(n)
    coeffs = [sum((Fraction(xi) * row[j] for xi, row in zip(x, m)), Fraction(0)) for j in range(len(m))]
    return Pic1Coordinates(n, tuple(coeffs))


def curve_values(f: FCurve) -> list[Fraction]:
    """Intersections of the basis divisors with f (type-1 curves in λ units)."""
    return [vir_intersection_fcurve(VIR5, w, f) for w in basis_labels(f.n)]


def curve_dual_vector(f: FCurve) -> tuple[Fraction, ...]:
    """Vector u with D·f = <coordinates(D), u> for every class D."""
    if f.genus != 1:
        raise ValueError("genus-1 curves only")
    return tuple(matvec(_inverse(f.n), curve_values(f)))


def pair1(d: Divisor1 | Pic1Coordinates, f: FCurve) -> Fraction:
    c = d if isinstance(d, Pic1Coordinates) else Pic1Coordinates.of(d)
    return sum((a * b for a, b in zip(c.coeffs, curve_dual_vector(f))), Fraction(0))


def matrix_json(m) -> str:
    return json.dumps([[fmt(x) for x in row] for row in m])


def basis_report(n: int) -> dict:
    _check_cap(n)
    w2 = Pic1Coordinates.of(divisor1_from_vir(VIR5, (2,) * n)) if n >= 1 else None
    t_val = t_functional(w2)
    expected = -Fraction(5) ** (n // 2 - 1) if n >= 2 else None
    return {
        "n": n,
        "size": len(basis_labels(n)),
        "invertible": basis_is_invertible(n),
        "t_value": fmt(t_val),
        "t_expected": None if expected is None else fmt(expected),
        "t_ok": expected is None or t_val == expected,
    }


# ---------------------------------------------------------------- subspaces


def _span_rank(vectors) -> int:
    return rank([list(v) for v in vectors]) if vectors else 0


def pullback_images(n: int, i: int) -> list[tuple[Fraction, ...]]:
    """π_i^* of the (n-1)-point Vir_5 basis, as canonical coordinates on n points."""
    return [tuple(pullback_pi(Divisor1.from_coordinates(n - 1, row), i).coordinates()) for row in vir5_basis_matrix(n - 1)]


def propagation_agrees(n: int, i: int) -> bool:
    """π_i^* D_{1,n-1}(W) equals D_{1,n}(W with V inserted at i) for every basis W."""
    for w, img in zip(basis_labels(n - 1), pullback_images(n, i)):
        inserted = w[: i - 1] + (1,) + w[i - 1:]
        if tuple(divisor1_from_vir(VIR5, inserted).coordinates()) != img:
            return False
    return True


def kernel_t_check(n: int) -> dict:
    """ker T equals the sum of the pullback images π_i^*."""
    images = [v for i in range(1, n + 1) for v in pullback_images(n, i)]
    t_vec = [Fraction(0)] + [Fraction((-1) ** len(s)) for s in pic1_basis(n)]
    dim_sum = _span_rank(images)
    in_kernel = all(sum((a * b for a, b in zip(v, t_vec)), Fraction(0)) == 0 for v in images)
    return {"n": n, "dim_sum": dim_sum, "dim_ker_t": dimension(n) - 1, "ok": in_kernel and dim_sum == dimension(n) - 1}


def knudsen_curves(n: int, i: int, j: int) -> list[FCurve]:
    """F-curves contracted by forgetting i and by forgetting j: {i} and {j} are both singleton legs."""
    want = {(i,), (j,)}
    out = []
    for f in enumerate_fcurves1(n):
        if f.elliptic:
            continue
        singles = {t.points for t in f.tails if t.genus == 0 and t.legs == 1 and len(t.points) == 1}
        if want <= singles:
            out.append(f)
    return out


def contraction_kernel_check(n: int, i: int, j: int) -> dict:
    if n < 3 or i == j or not (1 <= i <= n and 1 <= j <= n):
        raise ValueError("need n >= 3 and distinct i, j in [n]")
    curves = knudsen_curves(n, i, j)
    duals = [curve_dual_vector(f) for f in curves]
    images = pullback_images(n, i) + pullback_images(n, j)
    dim_sum = _span_rank(images)
    annihilator = nullspace([list(u) for u in duals], dimension(n))
    dim_ann = len(annihilator)
    # every pullback kills the curves, and the dimensions match
    kills = all(sum((a * b for a, b in zip(v, u)), Fraction(0)) == 0 for v in images for u in duals)
    curve_rank = _span_rank(duals)
    dims = {
        "pic_n_minus_2": 2 ** (n - 2) - (n - 2),
        "pic_pair": 2 * (2 ** (n - 1) - (n - 1)),
        "pic_n": dimension(n),
        "curves": 2 ** (n - 2),
    }
    intersection = dims["pic_pair"] - dim_sum
    exact = (
        intersection == dims["pic_n_minus_2"]
        and dims["pic_n"] - dim_sum == dims["curves"]
        and dims["pic_n_minus_2"] - dims["pic_pair"] + dims["pic_n"] - dims["curves"] == 0
    )
    target = 2 ** n - 2 ** (n - 2) - n
    ok = len(curves) == 2 ** (n - 2) and curve_rank == len(curves) and kills and dim_sum == dim_ann == target
    return {
        "n": n, "i": i, "j": j,
        "curves": len(curves),
        "curve_rank": curve_rank,
        "dim_pullbacks": dim_sum,
        "dim_annihilator": dim_ann,
        "expected": target,
        "sequence_dims": dims,
        "sequence_exact": exact,
        "ok": ok and exact,
    }


def _restriction_rows(n: int) -> list[list[Fraction]]:
    """Matrix of D ↦ (restrict_fi(D, i))_{i<n} in canonical coordinates; columns are classes."""
    dim = dimension(n)
    cols = []
    for idx in range(dim):
        e = [Fraction(0)] * dim
        e[idx] = Fraction(1)
        d = Divisor1.from_coordinates(n, e)
        col = []
        for i in range(1, n):
            col.extend(restrict_fi(d, i).coordinates())
        cols.append(col)
    return [list(r) for r in zip(*cols)]


def psi_characterization_check(n: int) -> dict:
    """Classes trivial on every Δ_{0,{i,n}} form a plane; one F_5(0,0,I,J) cuts it to the ψ_n line."""
    if n < 2:
        raise ValueError("need n >= 2")
    dim = dimension(n)
    space = nullspace(_restriction_rows(n), dim)
    psi_n = Pic1Coordinates.of(psi1(n, n)).coeffs
    full = tuple(range(1, n))
    delta = [Fraction(0)] * dim
    delta[1 + pic1_basis(n).index(full)] = Fraction(1)
    in_space = rank(space + [list(psi_n)]) == len(space) and rank(space + [delta]) == len(space)
    results = []
    for mask in range(1, 2 ** (n - 1) - 1):
        i_set = tuple(p for p in full if mask >> (p - 1) & 1)
        j_set = tuple(p for p in full if not mask >> (p - 1) & 1)
        if i_set > j_set:
            continue
        u = curve_dual_vector(fcurve1_type5(n, i_set, j_set))
        vals = [sum((a * b for a, b in zip(v, u)), Fraction(0)) for v in space]
        cut = nullspace([vals], len(space)) if any(vals) else [[Fraction(int(r == c)) for c in range(len(space))] for r in range(len(space))]
        line = [[sum((x * v[c] for x, v in zip(coeffs, space)), Fraction(0)) for c in range(dim)] for coeffs in cut]
        is_psi = len(line) == 1 and rank(line + [list(psi_n)]) == 1
        delta_pair = sum((a * b for a, b in zip(delta, u)), Fraction(0))
        results.append({"I": list(i_set), "J": list(j_set), "delta_pairing": delta_pair, "psi_line": is_psi})
    ok = len(space) == 2 and in_space and all(r["psi_line"] and r["delta_pairing"] == 1 for r in results)
    for r in results:
        r["delta_pairing"] = fmt(r["delta_pairing"])
    return {"n": n, "dim_T": len(space), "contains_psi_and_delta": in_space, "curves": results, "ok": ok}
