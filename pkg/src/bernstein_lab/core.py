"""Exact-arithmetic core for quadratic stochastic operators.

An operator on the probability simplex is stored as its inheritance
tensor: nonnegative coefficients p[i,k,j] (1-based, symmetric in i,k)
with sum_j p[i,k,j] = 1 for every pair.  The same object is the
multiplication table of the induced commutative algebra on R^n, where
the basis product e_i * e_k is the coefficient row p[i,k,:].

Everything is computed over exact rationals.  An approximate mode
(``exact=False``) keeps the arithmetic exact but relaxes every equality
test to a relative tolerance of 1e-9; it exists for tensors imported
from floating-point data.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

RationalLike = Union[Fraction, int, float, str]


# ---------------------------------------------------------------------------
# errors
# ---------------------------------------------------------------------------

class DimensionMismatchError(ValueError):
    """Operands do not share the tensor's dimension."""


class StochasticityError(ValueError):
    """Tensor entries are negative or a pair row does not sum to one."""

    def __init__(self, message: str, pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.pair = pair


class NotBernsteinError(ValueError):
    """Operation requires the stationarity property and the input lacks it."""


class NotIdempotentError(ValueError):
    """Operation requires a nonzero idempotent element."""


class GuardExceededError(ValueError):
    """A combinatorial enumeration guard was exceeded."""


class InternalInvariantError(RuntimeError):
    """A mathematically guaranteed consistency check failed; this is a bug."""


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------

def rational(value: RationalLike) -> Fraction:
    """Parse a scalar into an exact Fraction.

    Accepts Fractions, ints, "a/b" strings, decimal strings and floats.
    Floats are converted exactly (no rounding beyond the float itself).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("boolean is not a scalar")
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational scalar")


class Tolerance:
    """Equality policy: exact (default) or relative 1e-9 for float data."""

    __slots__ = ("rel",)

    def __init__(self, rel: Fraction | None):
        self.rel = rel

    @property
    def exact(self) -> bool:
        return self.rel is None

    def is_zero(self, value: Fraction) -> bool:
        if self.rel is None:
            return value == 0
        return abs(value) <= self.rel

    def eq(self, a: Fraction, b: Fraction) -> bool:
        if self.rel is None:
            return a == b
        scale = max(Fraction(1), abs(a), abs(b))
        return abs(a - b) <= self.rel * scale

    def snap(self, value: Fraction) -> Fraction:
        return Fraction(0) if self.is_zero(value) else value


EXACT = Tolerance(None)
FLOAT_TOLERANCE = Tolerance(Fraction(1, 10**9))


# ---------------------------------------------------------------------------
# vectors
# ---------------------------------------------------------------------------

class Vector:
    """Immutable vector with exact rational coordinates (0-based access)."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable[RationalLike]):
        object.__setattr__(self, "coords", tuple(rational(c) for c in coords))

    @classmethod
    def _wrap(cls, coords: tuple[Fraction, ...]) -> "Vector":
        v = object.__new__(cls)
        object.__setattr__(v, "coords", coords)
        return v

    @classmethod
    def zero(cls, n: int) -> "Vector":
        return cls._wrap((Fraction(0),) * n)

    @classmethod
    def basis(cls, n: int, index: int) -> "Vector":
        """Standard basis vector e_index (index is 1-based)."""
        if not 1 <= index <= n:
            raise IndexError(f"basis index {index} out of range 1..{n}")
        coords = [Fraction(0)] * n
        coords[index - 1] = Fraction(1)
        return cls._wrap(tuple(coords))

    def __setattr__(self, name, value):
        raise AttributeError("Vector is immutable")

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coords)

    def __getitem__(self, i: int) -> Fraction:
        return self.coords[i]

    def __add__(self, other: "Vector") -> "Vector":
        if len(self.coords) != len(other.coords):
            raise DimensionMismatchError("vector dimensions differ")
        return Vector._wrap(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Vector") -> "Vector":
        if len(self.coords) != len(other.coords):
            raise DimensionMismatchError("vector dimensions differ")
        return Vector._wrap(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Vector":
        return Vector._wrap(tuple(-a for a in self.coords))

    def __mul__(self, scalar: RationalLike) -> "Vector":
        s = rational(scalar)
        return Vector._wrap(tuple(a * s for a in self.coords))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Vector) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return f"Vector({', '.join(str(c) for c in self.coords)})"

    def is_zero(self, tolerance: Tolerance = EXACT) -> bool:
        return all(tolerance.is_zero(c) for c in self.coords)

    def dot(self, other: "Vector") -> Fraction:
        if len(self.coords) != len(other.coords):
            raise DimensionMismatchError("vector dimensions differ")
        return sum((a * b for a, b in zip(self.coords, other.coords)), Fraction(0))


class SimplexPoint(Vector):
    """Vector with nonnegative coordinates of total weight one."""

    __slots__ = ()

    def __init__(self, coords: Iterable[RationalLike], tolerance: Tolerance = EXACT):
        super().__init__(coords)
        total = sum(self.coords, Fraction(0))
        if not tolerance.eq(total, Fraction(1)):
            raise ValueError(f"simplex point must have weight 1, got {total}")
        for idx, c in enumerate(self.coords):
            if c < 0 and not tolerance.is_zero(c):
                raise ValueError(f"simplex coordinate {idx + 1} is negative: {c}")


def weight(x: Vector) -> Fraction:
    """Coordinate sum; the multiplicative weight functional of the algebra."""
    return sum(x.coords, Fraction(0))


def barycenter(n: int) -> SimplexPoint:
    return SimplexPoint([Fraction(1, n)] * n)


# ---------------------------------------------------------------------------
# inheritance tensor
# ---------------------------------------------------------------------------

def _fold_key(i: int, k: int, j: int) -> tuple[int, int, int]:
    return (i, k, j) if i <= k else (k, i, j)


class InheritanceTensor:
    """Symmetric row-stochastic structure constants p[i,k,j].

    Entries are stored sparsely with keys (i, k, j), i <= k, 1-based;
    lookups with i > k resolve through the symmetry.  Validation happens
    once at construction; instances are immutable and hashable.
    """

    __slots__ = ("n", "exact", "_entries", "_rows", "_sorted", "_hash", "_int")

    def __init__(self, n: int, entries: Mapping[tuple[int, int, int], RationalLike],
                 exact: bool = True):
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"dimension must be a positive integer, got {n!r}")
        tol = EXACT if exact else FLOAT_TOLERANCE
        folded: dict[tuple[int, int, int], Fraction] = {}
        for (i, k, j), raw in entries.items():
            if not (1 <= i <= n and 1 <= k <= n and 1 <= j <= n):
                raise ValueError(f"index triple ({i},{k},{j}) out of range 1..{n}")
            value = rational(raw)
            key = _fold_key(i, k, j)
            if key in folded and folded[key] != value:
                raise ValueError(f"conflicting symmetric entries for {key}")
            if value < 0:
                if tol.is_zero(value):
                    value = Fraction(0)
                else:
                    raise StochasticityError(
                        f"coefficient p[{i},{k},{j}] = {value} is negative",
                        pair=(min(i, k), max(i, k)))
            if value != 0:
                folded[key] = value
        sums: dict[tuple[int, int], Fraction] = {}
        for (i, k, j), value in folded.items():
            sums[(i, k)] = sums.get((i, k), Fraction(0)) + value
        for i in range(1, n + 1):
            for k in range(i, n + 1):
                total = sums.get((i, k), Fraction(0))
                if not tol.eq(total, Fraction(1)):
                    raise StochasticityError(
                        f"row p[{i},{k},:] sums to {total}, expected 1",
                        pair=(i, k))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "exact", exact)
        object.__setattr__(self, "_entries", folded)
        object.__setattr__(self, "_rows", {})
        object.__setattr__(self, "_sorted", None)
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_int", None)

    def __setattr__(self, name, value):
        raise AttributeError("InheritanceTensor is immutable")

    # -- lookups ------------------------------------------------------------

    @property
    def tolerance(self) -> Tolerance:
        return EXACT if self.exact else FLOAT_TOLERANCE

    def value(self, i: int, k: int, j: int) -> Fraction:
        return self._entries.get(_fold_key(i, k, j), Fraction(0))

    def row(self, i: int, k: int) -> Vector:
        """The product e_i * e_k as a dense vector."""
        key = (i, k) if i <= k else (k, i)
        cached = self._rows.get(key)
        if cached is None:
            coords = [Fraction(0)] * self.n
            a, b = key
            for j in range(1, self.n + 1):
                v = self._entries.get((a, b, j))
                if v is not None:
                    coords[j - 1] = v
            cached = Vector._wrap(tuple(coords))
            self._rows[key] = cached
        return cached

    def pairs(self) -> Iterator[tuple[int, int]]:
        n = self.n
        for i in range(1, n + 1):
            for k in range(i, n + 1):
                yield (i, k)

    def sorted_entries(self) -> tuple[tuple[tuple[int, int, int], Fraction], ...]:
        if self._sorted is None:
            items = tuple(sorted(self._entries.items()))
            object.__setattr__(self, "_sorted", items)
        return self._sorted

    def integer_rows(self) -> tuple[int, dict[tuple[int, int], tuple[int, ...]]]:
        """All rows scaled by a common integer D so every entry is an int.

        Returns (D, {(i,k): row}) with row[j-1] = D * p[i,k,j].  Used by
        the hot verification paths; exact by construction.
        """
        if self._int is None:
            scale = 1
            for v in self._entries.values():
                scale = scale * v.denominator // math.gcd(scale, v.denominator)
            rows: dict[tuple[int, int], tuple[int, ...]] = {}
            for (i, k) in self.pairs():
                coords = [0] * self.n
                for j in range(1, self.n + 1):
                    v = self._entries.get((i, k, j))
                    if v is not None:
                        coords[j - 1] = int(v * scale)
                rows[(i, k)] = tuple(coords)
            object.__setattr__(self, "_int", (scale, rows))
        return self._int

    # -- identity -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (isinstance(other, InheritanceTensor)
                and self.n == other.n
                and self.exact == other.exact
                and self._entries == other._entries)

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash",
                               hash((self.n, self.exact, self.sorted_entries())))
        return self._hash

    def __repr__(self) -> str:
        return f"InheritanceTensor(n={self.n}, entries={len(self._entries)})"


def permute_tensor(a: InheritanceTensor, perm: Sequence[int]) -> InheritanceTensor:
    """Relabel basis indices; perm maps old to new (1-based, perm[old-1] = new)."""
    if sorted(perm) != list(range(1, a.n + 1)):
        raise ValueError("perm must be a permutation of 1..n")
    entries = {}
    for (i, k, j), v in a.sorted_entries():
        entries[_fold_key(perm[i - 1], perm[k - 1], perm[j - 1])] = v
    return InheritanceTensor(a.n, entries, exact=a.exact)


# ---------------------------------------------------------------------------
# algebra operations
# ---------------------------------------------------------------------------

def _check_dim(a: InheritanceTensor, x: Vector):
    if len(x) != a.n:
        raise DimensionMismatchError(
            f"vector of dimension {len(x)} does not match tensor dimension {a.n}")


def multiply(a: InheritanceTensor, x: Vector, y: Vector) -> Vector:
    """Bilinear product of x and y in the algebra defined by the tensor."""
    _check_dim(a, x)
    _check_dim(a, y)
    n = a.n
    out = [Fraction(0)] * n
    xc, yc = x.coords, y.coords
    for i in range(n):
        xi, yi = xc[i], yc[i]
        if xi == 0 and yi == 0:
            continue
        for k in range(i, n):
            if i == k:
                coeff = xi * yi
            else:
                coeff = xi * yc[k] + xc[k] * yi
            if coeff == 0:
                continue
            row = a.row(i + 1, k + 1).coords
            for j in range(n):
                rj = row[j]
                if rj != 0:
                    out[j] += coeff * rj
    return Vector._wrap(tuple(out))


def evolve(a: InheritanceTensor, x: SimplexPoint) -> SimplexPoint:
    """One generation step: the square x*x, again a simplex point."""
    if not isinstance(x, SimplexPoint):
        x = SimplexPoint(x, tolerance=a.tolerance)
    squared = multiply(a, x, x)
    return SimplexPoint(squared.coords, tolerance=a.tolerance)


def r_op(a: InheritanceTensor, x: Vector, y: Vector) -> Vector:
    """Deviation of the product from the unit-algebra product:
    2*x*y - weight(y)*x - weight(x)*y."""
    prod = multiply(a, x, y)
    wx, wy = weight(x), weight(y)
    return Vector._wrap(tuple(
        2 * p - wy * xi - wx * yi
        for p, xi, yi in zip(prod.coords, x.coords, y.coords)))


# ---------------------------------------------------------------------------
# quartic stationarity residual
# ---------------------------------------------------------------------------

class QuarticForm:
    """Degree-4 coefficient table, keyed by (coordinate, sorted 4-multiset).

    Collects, for every output coordinate, the symmetrized coefficients of
    the polynomial (x*x)*(x*x) - weight(x)^2 * (x*x).  The table is empty
    exactly when the operator satisfies the stationarity identity.
    """

    __slots__ = ("n", "_table")

    def __init__(self, n: int,
                 table: Mapping[tuple[int, tuple[int, int, int, int]], Fraction]):
        self.n = n
        self._table = {key: v for key, v in table.items() if v != 0}

    def coefficient(self, coordinate: int,
                    multiset: Sequence[int]) -> Fraction:
        key = (coordinate, tuple(sorted(multiset)))
        return self._table.get(key, Fraction(0))

    def nonzero(self) -> list[tuple[tuple[int, tuple[int, int, int, int]], Fraction]]:
        return sorted(self._table.items())

    def is_zero(self, tolerance: Tolerance = EXACT) -> bool:
        if tolerance.exact:
            return not self._table
        return all(tolerance.is_zero(v) for v in self._table.values())

    def __len__(self) -> int:
        return len(self._table)

    def __repr__(self) -> str:
        return f"QuarticForm(n={self.n}, nonzero={len(self._table)})"


def expand_bernstein_residual(a: InheritanceTensor) -> QuarticForm:
    """Symbolic expansion of (x*x)*(x*x) - weight(x)^2 * (x*x).

    Coefficients are collected per sorted coordinate multiset with the
    multinomial multiplicities folded in, so the result is zero as a table
    iff the residual is the zero polynomial in every output coordinate.
    """
    n = a.n
    scale, int_rows = a.integer_rows()
    # quad[c] maps a pair multiset (i,k), i<=k, to the integer coefficient of
    # x_i x_k in scale * (x*x)_c.
    quad: list[dict[tuple[int, int], int]] = [dict() for _ in range(n + 1)]
    for (i, k), row in int_rows.items():
        mult = 1 if i == k else 2
        for j in range(n):
            v = row[j]
            if v:
                quad[j + 1][(i, k)] = mult * v

    # Pairwise products of the quadratic tables: quartic tables at scale^2.
    prod: dict[tuple[int, int], dict[tuple[int, ...], int]] = {}
    for atail in range(1, n + 1):
        qa = quad[atail]
        if not qa:
            continue
        for btail in range(atail, n + 1):
            qb = quad[btail]
            if not qb:
                continue
            table: dict[tuple[int, ...], int] = {}
            for m1, c1 in qa.items():
                for m2, c2 in qb.items():
                    key = tuple(sorted(m1 + m2))
                    table[key] = table.get(key, 0) + c1 * c2
            prod[(atail, btail)] = table

    residual: dict[tuple[int, tuple[int, int, int, int]], Fraction] = {}
    denom = scale ** 3
    all_pairs = [(i, k) for i in range(1, n + 1) for k in range(i, n + 1)]
    for j in range(1, n + 1):
        acc: dict[tuple[int, ...], int] = {}
        # ((x*x)*(x*x))_j at scale^3
        for (atail, btail), table in prod.items():
            w = int_rows[(atail, btail)][j - 1]
            if not w:
                continue
            if atail != btail:
                w *= 2
            for key, c in table.items():
                acc[key] = acc.get(key, 0) + w * c
        # weight(x)^2 * (x*x)_j at scale^3
        qj = quad[j]
        if qj:
            for (i, k) in all_pairs:
                mult = scale * scale if i == k else 2 * scale * scale
                for m2, c2 in qj.items():
                    key = tuple(sorted((i, k) + m2))
                    acc[key] = acc.get(key, 0) - mult * c2
        for key, c in acc.items():
            if c:
                residual[(j, key)] = Fraction(c, denom)
    return QuarticForm(n, residual)


# ---------------------------------------------------------------------------
# seeded sampling
# ---------------------------------------------------------------------------

def random_simplex_point(rng: random.Random, n: int,
                         max_numerator: int = 9) -> SimplexPoint:
    """Interior simplex point with small rational coordinates."""
    nums = [rng.randint(1, max_numerator) for _ in range(n)]
    total = sum(nums)
    return SimplexPoint([Fraction(a, total) for a in nums])


def random_vector(rng: random.Random, n: int) -> Vector:
    return Vector([Fraction(rng.randint(-6, 6), rng.randint(1, 6))
                   for _ in range(n)])
