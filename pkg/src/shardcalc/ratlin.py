"""Exact rational linear algebra and a small simplex LP solver.

Everything in this package that touches geometry goes through this module, so
that no floating point ever enters a feasibility decision.  Vectors are tuples
of fractions.Fraction; matrices are lists of such tuples.

The LP solver is a plain dense two-phase simplex with Bland's anti-cycling
rule.  The systems solved here are tiny (at most a few dozen constraints in
dimension <= 8 after splitting free variables), so simplicity wins over speed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

Vec = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(value) -> Fraction:
    """Parse a rational from an int, a Fraction, or a string like '-3/7'."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def vec(values: Iterable) -> Vec:
    return tuple(rat(v) for v in values)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), ZERO)


def scale(a: Sequence[Fraction], k: Fraction) -> Vec:
    return tuple(x * k for x in a)


def is_zero_vec(a: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in a)


def parallel(a: Sequence[Fraction], b: Sequence[Fraction]) -> bool:
    """True iff a and b are proportional (both assumed nonzero)."""
    n = len(a)
    for i in range(n):
        for j in range(i + 1, n):
            if a[i] * b[j] != a[j] * b[i]:
                return False
    return True


def row_echelon_basis(rows: Iterable[Sequence[Fraction]]) -> list[Vec]:
    """A basis (in echelon form) of the row space of the given vectors."""
    basis: list[list[Fraction]] = []
    pivots: list[int] = []
    for row in rows:
        r = list(row)
        for b, p in zip(basis, pivots):
            if r[p] != 0:
                k = r[p] / b[p]
                r = [x - k * y for x, y in zip(r, b)]
        piv = next((i for i, x in enumerate(r) if x != 0), None)
        if piv is not None:
            basis.append(r)
            pivots.append(piv)
    order = sorted(range(len(basis)), key=lambda i: pivots[i])
    return [tuple(basis[i]) for i in order]


def rank(rows: Iterable[Sequence[Fraction]]) -> int:
    return len(row_echelon_basis(rows))


def in_span(v: Sequence[Fraction], basis: Sequence[Sequence[Fraction]]) -> bool:
    r = list(v)
    for b in basis:
        p = next(i for i, x in enumerate(b) if x != 0)
        if r[p] != 0:
            k = r[p] / b[p]
            r = [x - k * y for x, y in zip(r, b)]
    return all(x == 0 for x in r)


def span_leq(rows_a: Sequence[Sequence[Fraction]],
             rows_b: Sequence[Sequence[Fraction]]) -> bool:
    """True iff span(rows_a) is contained in span(rows_b)."""
    basis = row_echelon_basis(rows_b)
    return all(in_span(a, basis) for a in rows_a)


class _Tableau:
    """Dense simplex tableau: rows are equality constraints over nonneg vars."""

    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction],
                 basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r: int, c: int) -> None:
        piv = self.rows[r][c]
        inv = ONE / piv
        self.rows[r] = [x * inv for x in self.rows[r]]
        self.rhs[r] *= inv
        for i, row in enumerate(self.rows):
            if i != r and row[c] != 0:
                k = row[c]
                self.rows[i] = [x - k * y for x, y in zip(row, self.rows[r])]
                self.rhs[i] -= k * self.rhs[r]
        self.basis[r] = c

    def optimize(self, cost: list[Fraction]) -> tuple[str, Fraction]:
        """Maximize cost over the current feasible basis (Bland's rule)."""
        nvars = len(cost)
        while True:
            red = list(cost)
            offset = ZERO
            for r, b in enumerate(self.basis):
                if cost[b] != 0:
                    k = cost[b]
                    red = [x - k * y for x, y in zip(red, self.rows[r])]
                    offset += k * self.rhs[r]
            enter = next((j for j in range(nvars)
                          if j not in self.basis and red[j] > 0), None)
            if enter is None:
                return "optimal", offset
            leave = None
            best: Optional[Fraction] = None
            for r in range(len(self.rows)):
                a = self.rows[r][enter]
                if a > 0:
                    ratio = self.rhs[r] / a
                    if best is None or ratio < best or (
                            ratio == best and self.basis[r] < self.basis[leave]):
                        best, leave = ratio, r
            if leave is None:
                return "unbounded", offset
            self.pivot(leave, enter)

    def solution(self, nvars: int) -> list[Fraction]:
        x = [ZERO] * nvars
        for r, b in enumerate(self.basis):
            if b < nvars:
                x[b] = self.rhs[r]
        return x


def solve_lp(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction],
             c: Sequence[Fraction]) -> tuple[str, Optional[Vec], Optional[Fraction]]:
    """Maximize c.x subject to A x <= b with x free (unrestricted sign).

    Returns (status, x, value); status is 'optimal', 'infeasible' or
    'unbounded'.  Free variables are split into differences of nonnegative
    variables internally.
    """
    m = len(A)
    n = len(c)
    # Columns: n positive parts, n negative parts, m slacks, artificials later.
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i in range(m):
        row = [rat(x) for x in A[i]] + [-rat(x) for x in A[i]]
        row += [ONE if j == i else ZERO for j in range(m)]
        bi = rat(b[i])
        if bi < 0:
            row = [-x for x in row]
            bi = -bi
        rows.append(row)
        rhs.append(bi)
    width = 2 * n + m
    # Phase 1: artificial variables for every row; minimize their sum.
    basis = []
    for i in range(m):
        for r in rows:
            r.append(ONE if r is rows[i] else ZERO)
        basis.append(width + i)
    tab = _Tableau(rows, rhs, basis)
    phase1 = [ZERO] * width + [-ONE] * m
    status, value = tab.optimize(phase1)
    if value < 0:
        return "infeasible", None, None
    # Drive leftover artificials out of the basis when possible.
    for r in range(m):
        if tab.basis[r] >= width:
            col = next((j for j in range(width) if tab.rows[r][j] != 0), None)
            if col is not None:
                tab.pivot(r, col)
    # Phase 2 on the original columns (artificial columns frozen at zero).
    cost = [rat(x) for x in c] + [-rat(x) for x in c] + [ZERO] * m + [ZERO] * m
    for j in range(width, width + m):
        cost[j] = Fraction(-10 ** 9)  # never re-enter
    status, value = tab.optimize(cost)
    if status == "unbounded":
        return "unbounded", None, None
    sol = tab.solution(2 * n)
    x = tuple(sol[j] - sol[n + j] for j in range(n))
    return "optimal", x, value


def strict_cone_point(ineqs: Sequence[Sequence[Fraction]],
                      eqs: Sequence[Sequence[Fraction]] = ()) -> Optional[Vec]:
    """A point x with a.x >= 1 for each a in ineqs and e.x = 0 for each e in eqs.

    Returns None when no such point exists.  Because the constraints are
    homogeneous, strict feasibility of the open cone is equivalent to
    feasibility with slack 1; the returned witness maximizes the minimum
    slack capped at 1.
    """
    if not ineqs:
        # Any point of the subspace will do; the origin works.
        dim = len(eqs[0]) if eqs else 0
        return tuple([ZERO] * dim)
    dim = len(ineqs[0])
    # Variables (x, t); maximize t with a.x - t >= 0, t <= 1, e.x = 0.
    A: list[list[Fraction]] = []
    b: list[Fraction] = []
    for a in ineqs:
        A.append([-rat(v) for v in a] + [ONE])
        b.append(ZERO)
    A.append([ZERO] * dim + [ONE])
    b.append(ONE)
    for e in eqs:
        A.append([rat(v) for v in e] + [ZERO])
        b.append(ZERO)
        A.append([-rat(v) for v in e] + [ZERO])
        b.append(ZERO)
    c = [ZERO] * dim + [ONE]
    status, x, value = solve_lp(A, b, c)
    assert status == "optimal", status
    if value <= 0:
        return None
    assert value == 1
    return x[:dim]
