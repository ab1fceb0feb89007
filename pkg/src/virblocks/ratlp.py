"""Exact rational simplex (two phases, Bland's rule) with checkable certificates.

A problem asks for x with A x = b and either x >= lower bounds, or, in slack
mode, x_j >= t for every j with t >= 0 and t as large as possible.  The
answer is a feasible point or a Farkas vector y with y^T A <= 0 and
y^T (b - A l) > 0.  Every certificate is re-verified before it is returned.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

ZERO = Fraction(0)


class LpError(ValueError):
    pass


@dataclass(frozen=True)
class LpProblem:
    num_vars: int
    rows: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]
    lower_bounds: tuple[Fraction, ...] | None = None
    slack: bool = False
    t_cap: Fraction | None = None

    @classmethod
    def build(cls, rows: Sequence[Sequence], rhs: Sequence, lower_bounds=None, slack=False, t_cap=None) -> LpProblem:
        rows = tuple(tuple(Fraction(x) for x in r) for r in rows)
        rhs = tuple(Fraction(x) for x in rhs)
        num_vars = len(rows[0]) if rows else 0
        if lower_bounds is not None:
            lower_bounds = tuple(Fraction(x) for x in lower_bounds)
        if t_cap is not None:
            t_cap = Fraction(t_cap)
        p = cls(num_vars, rows, rhs, lower_bounds, slack, t_cap)
        p.validate()
        return p

    def validate(self) -> None:
        if len(self.rows) != len(self.rhs):
            raise LpError("row count and rhs length differ")
        if any(len(r) != self.num_vars for r in self.rows):
            raise LpError("row length differs from num_vars")
        if self.lower_bounds is not None:
            if self.slack:
                raise LpError("slack mode fixes the lower bounds to t")
            if len(self.lower_bounds) != self.num_vars:
                raise LpError("lower_bounds has the wrong length")

    def bounds(self) -> tuple[Fraction, ...]:
        return self.lower_bounds if self.lower_bounds is not None else (ZERO,) * self.num_vars


@dataclass(frozen=True)
class LpCertificate:
    status: str  # "Feasible" or "Infeasible"
    x: tuple[Fraction, ...] | None = None
    t: Fraction | None = None
    y: tuple[Fraction, ...] | None = None
    capped: bool = False
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return self.status == "Feasible"

    def verify(self, p: LpProblem) -> bool:
        if self.status == "Feasible":
            x = self.x
            if x is None or len(x) != p.num_vars:
                return False
            for row, b in zip(p.rows, p.rhs):
                if sum((a * v for a, v in zip(row, x) if a), ZERO) != b:
                    return False
            if p.slack:
                return self.t is not None and self.t >= 0 and all(v >= self.t for v in x)
            return all(v >= lo for v, lo in zip(x, p.bounds()))
        if self.status == "Infeasible":
            y = self.y
            if y is None or len(y) != len(p.rows):
                return False
            lo = (ZERO,) * p.num_vars if p.slack else p.bounds()
            for j in range(p.num_vars):
                if sum((yi * row[j] for yi, row in zip(y, p.rows) if yi), ZERO) > 0:
                    return False
            shifted = [b - sum((a * l for a, l in zip(row, lo) if a), ZERO) for row, b in zip(p.rows, p.rhs)]
            return sum((yi * bi for yi, bi in zip(y, shifted)), ZERO) > 0
        return False


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], basis: list[int]):
        self.rows = rows  # each row: coefficients then rhs
        self.basis = basis
        self.pivots = 0

    def pivot(self, r: int, c: int, obj: list[Fraction]) -> None:
        prow = self.rows[r]
        pv = prow[c]
        if pv != 1:
            prow = [v / pv for v in prow]
            self.rows[r] = prow
        nz = [j for j, v in enumerate(prow) if v]
        for i, row in enumerate(self.rows):
            if i != r and row[c]:
                f = row[c]
                for j in nz:
                    row[j] -= f * prow[j]
        if obj[c]:
            f = obj[c]
            for j in nz:
                obj[j] -= f * prow[j]
        self.basis[r] = c
        self.pivots += 1

    def run(self, obj: list[Fraction], allowed: int) -> int | None:
        """Minimize; returns None at optimum or the entering column of an unbounded ray."""
        while True:
            enter = next((j for j in range(allowed) if obj[j] < 0), None)
            if enter is None:
                return None
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return enter
            self.pivot(best[1], enter, obj)


def solve(p: LpProblem) -> LpCertificate:
    p.validate()
    m, nv = len(p.rows), p.num_vars
    # variables: z_0..z_{nv-1} (x minus its bound), then t in slack mode
    lo = (ZERO,) * nv if p.slack else p.bounds()
    ncols = nv + (1 if p.slack else 0)
    a_rows = []
    b_vals = []
    for row, b in zip(p.rows, p.rhs):
        r = list(row)
        if p.slack:
            r.append(sum(row, ZERO))
        a_rows.append(r)
        b_vals.append(b - sum((x * l for x, l in zip(row, lo) if x), ZERO))
    if p.slack and p.t_cap is not None:
        a_rows = [r + [ZERO] for r in a_rows]
        a_rows.append([ZERO] * nv + [Fraction(1), Fraction(1)])
        b_vals.append(p.t_cap)
        ncols += 1
    mm = len(a_rows)
    signs = [1 if b >= 0 else -1 for b in b_vals]
    rows = []
    for i, (r, b, s) in enumerate(zip(a_rows, b_vals, signs)):
        art = [ZERO] * mm
        art[i] = Fraction(1)
        rows.append([s * v for v in r] + art + [s * b])
    tab = _Tableau(rows, [ncols + i for i in range(mm)])
    obj = [ZERO] * (ncols + mm + 1)
    for row in rows:
        for j in range(ncols):
            obj[j] -= row[j]
        obj[-1] -= row[-1]
    tab.run(obj, ncols)
    if -obj[-1] > 0:
        y_ext = [1 - obj[ncols + i] for i in range(mm)]
        y = tuple(y_ext[i] * signs[i] for i in range(m))
        cert = LpCertificate("Infeasible", y=y, pivots=tab.pivots)
        if not cert.verify(p):
            raise LpError("internal error: Farkas witness failed verification")
        return cert
    # drive artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(tab.rows):
        if tab.basis[i] >= ncols:
            row = tab.rows[i]
            c = next((j for j in range(ncols) if row[j]), None)
            if c is None:
                del tab.rows[i]
                del tab.basis[i]
                continue
            tab.pivot(i, c, [ZERO] * (ncols + mm + 1))
        i += 1
    t_val = None
    capped = False
    if p.slack:
        tcol = nv
        obj = [ZERO] * (ncols + mm + 1)
        obj[tcol] = Fraction(-1)
        for i, bcol in enumerate(tab.basis):
            if bcol == tcol:
                row = tab.rows[i]
                for j, v in enumerate(row):
                    if v:
                        obj[j] += v
        obj[tcol] = ZERO if tcol in tab.basis else obj[tcol]
        ray = tab.run(obj, ncols)
        values = _basic_values(tab, ncols)
        if ray is not None:
            values = _follow_ray(tab, values, ray, tcol)
            capped = True
        t_val = values[tcol]
        capped = capped or (p.t_cap is not None and t_val == p.t_cap)
    else:
        values = _basic_values(tab, ncols)
    x = tuple(values[j] + (t_val if p.slack else lo[j]) for j in range(nv))
    cert = LpCertificate("Feasible", x=x, t=t_val, capped=capped, pivots=tab.pivots)
    if not cert.verify(p):
        raise LpError("internal error: feasible point failed verification")
    return cert


def _basic_values(tab: _Tableau, ncols: int) -> list[Fraction]:
    values = [ZERO] * ncols
    for i, bcol in enumerate(tab.basis):
        if bcol < ncols:
            values[bcol] = tab.rows[i][-1]
    return values


def _follow_ray(tab: _Tableau, values: list[Fraction], enter: int, tcol: int) -> list[Fraction]:
    """Move along an unbounded edge until t has grown by one."""
    direction = [ZERO] * len(values)
    direction[enter] = Fraction(1)
    for i, bcol in enumerate(tab.basis):
        if bcol < len(values):
            direction[bcol] = -tab.rows[i][enter]
    step = Fraction(1) / direction[tcol] if direction[tcol] > 0 else Fraction(1)
    return [v + step * d for v, d in zip(values, direction)]
