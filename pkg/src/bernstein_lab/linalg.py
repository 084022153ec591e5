"""Exact rational linear algebra on small dense matrices.

Rank and row echelon use fraction-free integer elimination (rows are
scaled to integers once, pivoting needs no tolerance).  Nullspace bases
are back-substituted over Fractions and normalized to primitive integer
vectors with a deterministic sign, so every caller sees a byte-stable
basis for the same input.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Row = Sequence[Fraction]


def _to_int_rows(rows: Sequence[Row]) -> list[list[int]]:
    out = []
    for row in rows:
        scale = 1
        for v in row:
            d = Fraction(v).denominator
            scale = scale * d // math.gcd(scale, d)
        ints = [int(v * scale) for v in row]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        if g > 1:
            ints = [v // g for v in ints]
        out.append(ints)
    return out


def row_echelon(rows: Sequence[Row]) -> tuple[list[list[int]], list[tuple[int, int]]]:
    """Fraction-free row echelon form.

    Returns (matrix, pivots) where pivots is a list of (row, column)
    positions in increasing column order.  Rows are kept gcd-reduced to
    bound coefficient growth.
    """
    m = _to_int_rows(rows)
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        lead = m[r][c]
        for i in range(r + 1, len(m)):
            if m[i][c] == 0:
                continue
            f, fi = lead, m[i][c]
            new = [f * a - fi * b for a, b in zip(m[i], m[r])]
            g = 0
            for v in new:
                g = math.gcd(g, v)
            if g > 1:
                new = [v // g for v in new]
            m[i] = new
        pivots.append((r, c))
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Row]) -> int:
    return len(row_echelon(rows)[1])


def nullspace(rows: Sequence[Row], ncols: int | None = None) -> list[tuple[Fraction, ...]]:
    """Deterministic basis of {x : rows @ x = 0}, primitive-integer scaled.

    One basis vector per free column, in increasing column order; each is
    scaled to coprime integers with positive leading nonzero entry.
    """
    if not rows:
        if ncols is None:
            raise ValueError("ncols required for an empty row list")
        return [tuple(Fraction(int(i == j)) for j in range(ncols))
                for i in range(ncols)]
    m, pivots = row_echelon(rows)
    ncols = len(m[0])
    pivot_cols = [c for _, c in pivots]
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    basis = []
    for f in free_cols:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, c in reversed(pivots):
            s = Fraction(0)
            row = m[r]
            for c2 in range(c + 1, ncols):
                if row[c2] and x[c2]:
                    s += row[c2] * x[c2]
            x[c] = -s / row[c]
        basis.append(tuple(primitive(x)))
    return basis


def primitive(vec: Sequence[Fraction]) -> list[Fraction]:
    """Scale a rational vector to coprime integers, first nonzero positive."""
    scale = 1
    for v in vec:
        d = Fraction(v).denominator
        scale = scale * d // math.gcd(scale, d)
    ints = [int(v * scale) for v in vec]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g == 0:
        return [Fraction(0)] * len(ints)
    ints = [v // g for v in ints]
    for v in ints:
        if v != 0:
            if v < 0:
                ints = [-w for w in ints]
            break
    return [Fraction(v) for v in ints]


def column_pivot_indices(columns: Sequence[Row]) -> list[int]:
    """Indices of a maximal independent subset of the given column vectors."""
    if not columns:
        return []
    nrows = len(columns[0])
    matrix = [[columns[c][r] for c in range(len(columns))] for r in range(nrows)]
    _, pivots = row_echelon(matrix)
    return [c for _, c in pivots]


def solve(rows: Sequence[Row], rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """One exact solution of rows @ x = rhs, or None if inconsistent."""
    if not rows:
        return [] if all(v == 0 for v in rhs) else None
    augmented = [list(row) + [r] for row, r in zip(rows, rhs)]
    m, pivots = row_echelon(augmented)
    ncols = len(rows[0])
    for r, c in pivots:
        if c == ncols:
            return None
    x = [Fraction(0)] * ncols
    for r, c in reversed(pivots):
        row = m[r]
        s = Fraction(row[ncols])
        for c2 in range(c + 1, ncols):
            if row[c2] and x[c2]:
                s -= row[c2] * x[c2]
        x[c] = s / row[c]
    return x


def in_span(vectors: Sequence[Row], target: Sequence[Fraction]) -> bool:
    """Whether target is a linear combination of the given vectors."""
    if all(v == 0 for v in target):
        return True
    if not vectors:
        return False
    nrows = len(target)
    rows = [[vec[r] for vec in vectors] for r in range(nrows)]
    return solve(rows, list(target)) is not None


def conic_combination(generators: Sequence[Row],
                      target: Sequence[Fraction]) -> list[Fraction] | None:
    """Exact nonnegative coefficients c with sum c_i * generators[i] = target.

    Phase-one simplex with Bland's rule over Fractions; returns None when
    the target lies outside the conic hull.
    """
    dim = len(target)
    ngen = len(generators)
    if all(v == 0 for v in target):
        return [Fraction(0)] * ngen
    if ngen == 0:
        return None
    # Standard form: rows A x = b with b >= 0, artificials appended.
    a = [[Fraction(generators[g][r]) for g in range(ngen)] for r in range(dim)]
    b = [Fraction(v) for v in target]
    for r in range(dim):
        if b[r] < 0:
            b[r] = -b[r]
            a[r] = [-v for v in a[r]]
    total = ngen + dim
    tableau = [a[r] + [Fraction(int(c == r)) for c in range(dim)] + [b[r]]
               for r in range(dim)]
    basis = [ngen + r for r in range(dim)]
    # objective: minimize sum of artificials
    cost = [Fraction(0)] * total
    for c in range(ngen, total):
        cost[c] = Fraction(1)

    def reduced_cost(col: int) -> Fraction:
        z = Fraction(0)
        for r in range(dim):
            z += cost[basis[r]] * tableau[r][col]
        return cost[col] - z

    while True:
        enter = None
        for col in range(total):
            if col in basis:
                continue
            if reduced_cost(col) < 0:
                enter = col
                break
        if enter is None:
            break
        leave = None
        best = None
        for r in range(dim):
            coeff = tableau[r][enter]
            if coeff > 0:
                ratio = tableau[r][total] / coeff
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best = ratio
                    leave = r
        if leave is None:
            return None
        piv = tableau[leave][enter]
        tableau[leave] = [v / piv for v in tableau[leave]]
        for r in range(dim):
            if r != leave and tableau[r][enter] != 0:
                f = tableau[r][enter]
                tableau[r] = [v - f * w for v, w in zip(tableau[r], tableau[leave])]
        basis[leave] = enter

    objective = sum((cost[basis[r]] * tableau[r][total] for r in range(dim)),
                    Fraction(0))
    if objective != 0:
        return None
    coeffs = [Fraction(0)] * ngen
    for r in range(dim):
        if basis[r] < ngen:
            coeffs[basis[r]] = tableau[r][total]
    return coeffs
