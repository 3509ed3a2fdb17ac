"""Exact symmetric forms over the rationals.

Everything here is exact: entries are :class:`fractions.Fraction`, lattice
vectors are tuples of Python ints, and no floating point is used.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

LatticeVector = tuple[int, ...]

POSITIVE_DEFINITE = "positive_definite"
POSITIVE_SEMIDEFINITE = "positive_semidefinite"
INDEFINITE = "indefinite"


class FormError(ValueError):
    """Raised on malformed forms, dimension mismatches or bad group elements."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise FormError("floating point entries are not accepted; pass ints, Fractions or 'p/q' strings")
    return Fraction(x)


@dataclass(frozen=True)
class SymForm:
    """An n x n symmetric rational matrix, used as a quadratic form."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __init__(self, rows):
        rows = tuple(tuple(_frac(x) for x in r) for r in rows)
        n = len(rows)
        if n < 2:
            raise FormError(f"forms must have dimension >= 2, got {n}")
        if any(len(r) != n for r in rows):
            raise FormError("matrix is not square")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise FormError(f"matrix is not symmetric at ({i},{j})")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __repr__(self):
        body = ", ".join("[" + ", ".join(_fmt(x) for x in r) + "]" for r in self.rows)
        return f"SymForm([{body}])"

    def __add__(self, other: "SymForm") -> "SymForm":
        _check_dim(self.n, other.n)
        return SymForm([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scaled(self, c) -> "SymForm":
        c = _frac(c)
        return SymForm([[c * x for x in r] for r in self.rows])

    def bilinear(self, v: Sequence[int], w: Sequence[int]) -> Fraction:
        _check_dim(self.n, len(v))
        _check_dim(self.n, len(w))
        return sum((v[i] * self.rows[i][j] * w[j] for i in range(self.n) for j in range(self.n)), Fraction(0))

    def denominator(self) -> int:
        return reduce(lcm, (x.denominator for r in self.rows for x in r), 1)

    def integer_rows(self) -> tuple[tuple[int, ...], int]:
        """Primitive integer matrix M and positive rational scale s with self = s * M."""
        d = self.denominator()
        ints = [[int(x * d) for x in r] for r in self.rows]
        g = reduce(gcd, (abs(x) for r in ints for x in r), 0) or 1
        return tuple(tuple(x // g for x in r) for r in ints), Fraction(g, d)

    def primitive(self) -> "SymForm":
        """Positive multiple of the form with coprime integer entries."""
        return SymForm(self.integer_rows()[0])

    def upper(self) -> tuple[Fraction, ...]:
        """Coordinates (a_ii, a_ij) in row-major upper-triangular order."""
        n = self.n
        return tuple(self.rows[i][j] for i in range(n) for j in range(i, n))

    @classmethod
    def from_upper(cls, n: int, coords: Sequence) -> "SymForm":
        it = iter(coords)
        m = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                m[i][j] = m[j][i] = _frac(next(it))
        return cls(m)

    def to_json(self) -> dict:
        return {"n": self.n, "rows": [[_json_num(x) for x in r] for r in self.rows]}

    @classmethod
    def from_json(cls, data) -> "SymForm":
        if isinstance(data, str):
            data = json.loads(data)
        form = cls(data["rows"])
        if "n" in data and data["n"] != form.n:
            raise FormError(f"declared n={data['n']} but matrix is {form.n}x{form.n}")
        return form


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _json_num(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _check_dim(n: int, m: int) -> None:
    if n != m:
        raise FormError(f"dimension mismatch: {n} vs {m}")


def identity(n: int) -> SymForm:
    return SymForm([[int(i == j) for j in range(n)] for i in range(n)])


# --- integer linear algebra --------------------------------------------------


def bareiss_det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    a = [list(map(int, r)) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def rank(rows: Iterable[Sequence]) -> int:
    """Rank over Q of a list of rational (or integer) row vectors."""
    return len(echelon_pivots(rows))


def echelon_pivots(rows: Iterable[Sequence]) -> list[int]:
    """Indices of rows that are linearly independent of the earlier ones."""
    basis: list[tuple[int, list[Fraction]]] = []  # (pivot column, reduced row)
    picked = []
    for idx, r in enumerate(rows):
        v = [_frac(x) for x in r]
        for col, b in basis:
            if v[col]:
                f = v[col] / b[col]
                v = [x - f * y for x, y in zip(v, b)]
        for col, x in enumerate(v):
            if x:
                basis.append((col, v))
                picked.append(idx)
                break
    return picked


def mat_mul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a]


def transpose(a):
    return [list(r) for r in zip(*a)]


def rational_inverse(a) -> list[list[Fraction]]:
    n = len(a)
    m = [[_frac(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a)]
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            raise FormError("matrix is singular")
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [r[n:] for r in m]


# --- public operations -------------------------------------------------------


def evaluate(a: SymForm, v: Sequence[int]) -> Fraction:
    """v^t A v."""
    _check_dim(a.n, len(v))
    rows = a.rows
    total = Fraction(0)
    for i, vi in enumerate(v):
        if vi:
            total += vi * sum((rows[i][j] * vj for j, vj in enumerate(v) if vj), Fraction(0))
    return total


def determinant(a: SymForm) -> Fraction:
    """Exact determinant, via Bareiss elimination on the cleared integer matrix."""
    d = a.denominator()
    ints = [[int(x * d) for x in r] for r in a.rows]
    return Fraction(bareiss_det(ints), d**a.n)


def definiteness(a: SymForm) -> str:
    """Classify A as positive definite, positive semidefinite or indefinite.

    Symmetric elimination with exact pivots. Negative (semi)definite and
    zero-free mixed-sign forms all report ``indefinite``. A rational form
    has a rational kernel, so for nonzero A membership in the closed cone
    of semidefinite forms with rational nullspace is exactly "not indefinite".
    """
    m = [list(r) for r in a.rows]
    n = a.n
    strict = True
    for k in range(n):
        piv = m[k][k]
        if piv < 0:
            return INDEFINITE
        if piv == 0:
            if any(m[k][j] for j in range(k + 1, n)):
                return INDEFINITE
            strict = False
            continue
        for i in range(k + 1, n):
            f = m[i][k] / piv
            if f:
                for j in range(k + 1, n):
                    m[i][j] -= f * m[k][j]
    return POSITIVE_DEFINITE if strict else POSITIVE_SEMIDEFINITE


def is_positive_definite(a: SymForm) -> bool:
    return definiteness(a) == POSITIVE_DEFINITE


def rank_one(v: Sequence[int]) -> SymForm:
    """The form v v^t."""
    if not any(v):
        raise FormError("rank_one needs a nonzero vector")
    return SymForm([[x * y for y in v] for x in v])


def unimodular_det(g) -> int:
    d = bareiss_det(g)
    if abs(d) != 1:
        raise FormError(f"matrix is not unimodular (det {d})")
    return d


def act(a: SymForm, g) -> SymForm:
    """Right action A . g = g^t A g of GL_n(Z)."""
    g = [list(map(int, r)) for r in g]
    if len(g) != a.n or any(len(r) != a.n for r in g):
        raise FormError("group element has the wrong shape")
    unimodular_det(g)
    return SymForm(mat_mul(mat_mul(transpose(g), a.rows), g))


def mat_vec(g, v: Sequence[int]) -> LatticeVector:
    return tuple(sum(x * y for x, y in zip(r, v)) for r in g)


def rank_one_coords(v: Sequence[int]) -> tuple[int, ...]:
    """Coordinates of v v^t paired with :meth:`SymForm.upper`.

    ``<R, v v^t> = sum(R.upper()[t] * rank_one_coords(v)[t])`` where the
    off-diagonal coordinates carry the factor 2.
    """
    n = len(v)
    return tuple(v[i] * v[i] if i == j else 2 * v[i] * v[j] for i in range(n) for j in range(i, n))


def canonical_sign(v: Sequence[int]) -> LatticeVector:
    """Representative of {v, -v} whose first nonzero coordinate is positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def gram_schmidt(a: SymForm):
    """Exact Gram-Schmidt data (mu, B) for the standard basis under A."""
    n = a.n
    mu = [[Fraction(0)] * n for _ in range(n)]
    b = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = a.rows[i][j] - sum((mu[j][k] * mu[i][k] * b[k] for k in range(j)), Fraction(0))
            mu[i][j] = s / b[j]
        b[i] = a.rows[i][i] - sum((mu[i][k] ** 2 * b[k] for k in range(i)), Fraction(0))
        if b[i] <= 0:
            raise FormError("form is not positive definite")
    return mu, b


def lll_reduce(a: SymForm, delta: Fraction = Fraction(99, 100)) -> tuple[SymForm, list[list[int]]]:
    """Exact LLL reduction of a positive definite Gram matrix.

    Returns ``(A', U)`` with ``A' = U^t A U`` and U unimodular; the columns
    of U are the reduced basis expressed in the original coordinates.
    """
    n = a.n
    basis = [[int(i == j) for j in range(n)] for i in range(n)]  # rows = basis vectors
    g = [list(r) for r in a.rows]

    def gram_of(bs):
        return [[_bil(g, bs[i], bs[j]) for j in range(n)] for i in range(n)]

    k = 1
    cur = gram_of(basis)
    mu, bstar = gram_schmidt(SymForm(cur))
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                basis[k] = [x - q * y for x, y in zip(basis[k], basis[j])]
                cur = gram_of(basis)
                mu, bstar = gram_schmidt(SymForm(cur))
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            basis[k], basis[k - 1] = basis[k - 1], basis[k]
            cur = gram_of(basis)
            mu, bstar = gram_schmidt(SymForm(cur))
            k = max(k - 1, 1)
    u = transpose(basis)
    return SymForm(cur), u


def _bil(g, v, w):
    return sum(v[i] * g[i][j] * w[j] for i in range(len(v)) if v[i] for j in range(len(w)) if w[j])
