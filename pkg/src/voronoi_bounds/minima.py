"""Minimal vectors, perfection, and reduction to a short lattice basis."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

from .forms import (
    FormError,
    LatticeVector,
    SymForm,
    act,
    bareiss_det,
    canonical_sign,
    determinant,
    evaluate,
    gram_schmidt,
    is_positive_definite,
    lll_reduce,
    mat_vec,
    rank,
    rank_one_coords,
    rational_inverse,
)


class BoundViolation(AssertionError):
    """A checked postcondition (e.g. h(b_i) <= N^2 mu) failed."""


@dataclass(frozen=True)
class MinVecSet:
    mu: Fraction
    vectors: tuple[LatticeVector, ...]

    @property
    def pair_count(self) -> int:
        return len(self.vectors)

    def to_json(self) -> dict:
        mu = self.mu
        return {
            "mu": str(mu.numerator) if mu.denominator == 1 else f"{mu.numerator}/{mu.denominator}",
            "pairs": [list(v) for v in self.vectors],
        }

    @classmethod
    def from_json(cls, data) -> "MinVecSet":
        return cls(Fraction(str(data["mu"])), tuple(tuple(v) for v in data["pairs"]))


def _require_pd(a: SymForm) -> None:
    if not is_positive_definite(a):
        raise FormError("form is not positive definite")


def _ceil_sqrt_bound(t: Fraction) -> int:
    """An integer r >= sqrt(t) for rational t >= 0."""
    return isqrt(t.numerator // t.denominator) + 1


def _enumerate(a: SymForm, bound: Fraction):
    """Yield (value, x) for all nonzero x with a[x] <= bound, one per +/- pair.

    Fincke-Pohst over the exact decomposition a[x] = sum_i q_i (x_i + sum_{j>i} m_ji x_j)^2.
    Emits vectors whose last nonzero coordinate is positive.
    """
    n = a.n
    mu, q = gram_schmidt(a)  # a[x] = sum_i q_i (x_i + sum_{j>i} mu[j][i] x_j)^2
    x = [0] * n

    def rec(i: int, remaining: Fraction, all_zero_above: bool):
        c = sum((mu[j][i] * x[j] for j in range(i + 1, n) if x[j]), Fraction(0))
        t = remaining / q[i]
        r = _ceil_sqrt_bound(t)
        centre = -c
        lo = int(centre) - r - 1
        hi = int(centre) + r + 1
        if all_zero_above:
            lo = max(lo, 0)
        for xi in range(lo, hi + 1):
            d = xi + c
            if d * d > t:
                continue
            x[i] = xi
            left = remaining - q[i] * d * d
            zero = all_zero_above and xi == 0
            if i == 0:
                if not zero:
                    yield bound - left, tuple(x)
            else:
                yield from rec(i - 1, left, zero)
        x[i] = 0

    yield from rec(n - 1, bound, True)


def short_vectors(a: SymForm, bound) -> list[tuple[Fraction, LatticeVector]]:
    """All nonzero v (one per +/- pair) with v^t A v <= bound, sorted.

    Enumeration runs on an LLL-reduced basis and maps back; vectors are
    returned with first nonzero coordinate positive, sorted by value then
    lexicographically.
    """
    _require_pd(a)
    bound = Fraction(bound)
    if bound <= 0:
        return []
    red, u = lll_reduce(a)
    out = []
    for val, y in _enumerate(red, bound):
        out.append((val, canonical_sign(mat_vec(u, y))))
    out.sort()
    return out


def shortest_vectors(a: SymForm) -> MinVecSet:
    """Minimum of A on Z^n - {0} and its minimal vectors up to sign."""
    _require_pd(a)
    red, u = lll_reduce(a)
    bound = min(red.rows[i][i] for i in range(a.n))
    found = [(val, canonical_sign(mat_vec(u, y))) for val, y in _enumerate(red, bound)]
    mu = min(v for v, _ in found)
    vecs = sorted(v for val, v in found if val == mu)
    return MinVecSet(mu, tuple(vecs))


def minimum(a: SymForm) -> Fraction:
    return shortest_vectors(a).mu


def perfection_rank(vectors: Sequence[LatticeVector]) -> int:
    return rank(rank_one_coords(v) for v in vectors)


def is_perfect(a: SymForm) -> bool:
    """True iff the rank-one forms of the minimal vectors span all symmetric matrices."""
    mv = shortest_vectors(a)
    n = a.n
    return perfection_rank(mv.vectors) == n * (n + 1) // 2


# --- bounded basis ------------------------------------------------------------


def _independent_columns(vectors: Sequence[LatticeVector], n: int) -> list[LatticeVector]:
    chosen: list[LatticeVector] = []
    for v in vectors:
        if rank(chosen + [v]) > len(chosen):
            chosen.append(v)
        if len(chosen) == n:
            break
    return chosen


def _hnf_upper_basis(v_cols: list[list[int]]) -> list[list[Fraction]]:
    """Columns C (upper triangular, rational) with Z^n = V C Z^n.

    Z^n corresponds, in coordinates w.r.t. the independent columns of V, to
    the lattice generated by the columns of V^{-1}. We bring those
    generators to upper-triangular Hermite form by exact column operations.
    """
    n = len(v_cols)
    vinv = rational_inverse(v_cols)  # rows of V^{-1}
    den = 1
    for r in vinv:
        for x in r:
            den = den * x.denominator // gcd(den, x.denominator)
    gens = [[int(vinv[i][j] * den) for i in range(n)] for j in range(n)]  # generator columns, scaled
    # column-style HNF: for row i from the bottom, make the column i the only one with nonzero entry i
    cols = gens
    basis: list[list[int]] = [None] * n  # basis[i] has zeros below row i
    pool = cols
    for i in range(n - 1, -1, -1):
        nonzero = [c for c in pool if c[i] != 0]
        rest = [c for c in pool if c[i] == 0]
        while len(nonzero) > 1:
            nonzero.sort(key=lambda c: abs(c[i]))
            piv = nonzero[0]
            new = [piv]
            for c in nonzero[1:]:
                qt = c[i] // piv[i]
                c2 = [x - qt * y for x, y in zip(c, piv)]
                if c2[i] != 0:
                    new.append(c2)
                else:
                    rest.append(c2)
            nonzero = new
        piv = nonzero[0]
        if piv[i] < 0:
            piv = [-x for x in piv]
        basis[i] = piv
        pool = rest
    return [[Fraction(x, den) for x in col] for col in basis]


def bounded_basis(a: SymForm) -> list[list[int]]:
    """Unimodular g (det +1) whose columns b_i satisfy a[b_i] <= N^2 mu(A).

    The minimal vectors must span R^N. Independent minimal vectors v_1..v_N
    generate a finite-index sublattice; a triangular basis of Z^N in terms of
    the v_i is size-reduced so that b_i = sum_{j<=i} c_ji v_j with
    |c_ji| <= 1/2 (j < i) and 0 < c_ii <= 1, giving sqrt(a[b_i]) <=
    (i+1)/2 sqrt(mu). The bound is re-checked exactly before returning.
    """
    _require_pd(a)
    n = a.n
    mv = shortest_vectors(a)
    vs = _independent_columns(mv.vectors, n)
    if len(vs) < n:
        raise FormError("minimal vectors do not span R^N")
    v_cols = [[vs[j][i] for j in range(n)] for i in range(n)]  # V with columns v_j
    c = _hnf_upper_basis(v_cols)  # c[i] = coefficient column for b_i, c[i][j] = 0 for j > i
    for i in range(n):
        for j in range(i - 1, -1, -1):
            qt = round(c[i][j] / c[j][j])
            if qt:
                c[i] = [x - qt * y for x, y in zip(c[i], c[j])]
    b_cols = []
    for i in range(n):
        col = [sum(c[i][j] * vs[j][r] for j in range(n)) for r in range(n)]
        if any(x.denominator != 1 for x in col):
            raise BoundViolation("basis construction produced a non-integral vector")
        b_cols.append([int(x) for x in col])
    g = [[b_cols[j][i] for j in range(n)] for i in range(n)]
    d = bareiss_det(g)
    if abs(d) != 1:
        raise BoundViolation(f"basis construction is not unimodular (det {d})")
    if d < 0:
        for r in g:
            r[0] = -r[0]
    limit = n * n * mv.mu
    for j in range(n):
        val = evaluate(a, [g[i][j] for i in range(n)])
        if val > limit:
            return _fallback_basis(a, limit, f"h(b_{j + 1}) = {val} > {limit}")
    return g


def _fallback_basis(a: SymForm, limit: Fraction, why: str) -> list[list[int]]:
    red, u = lll_reduce(a)
    if all(red.rows[i][i] <= limit for i in range(a.n)):
        if bareiss_det(u) < 0:
            for r in u:
                r[0] = -r[0]
        return u
    raise BoundViolation(why)


# --- coordinate bound -----------------------------------------------------------


@dataclass(frozen=True)
class Prop1Report:
    n: int
    basis: tuple[tuple[int, ...], ...]
    basis_values: tuple[Fraction, ...]
    basis_limit: Fraction
    max_coords: tuple[int, ...]
    bound: int
    ok: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "basis": [list(r) for r in self.basis],
            "basis_values": [str(x) for x in self.basis_values],
            "basis_limit": str(self.basis_limit),
            "max_coords": list(self.max_coords),
            "bound": self.bound,
            "ok": self.ok,
        }


def coordinate_ratio(a: SymForm, v: Sequence[int], i: int) -> Fraction:
    """det(A_i)/det(A): the Gram matrix with basis vector i replaced by v.

    Equals x_i^2 for v = sum x_j e_j; used as an independent check on the
    coordinates of minimal vectors.
    """
    n = a.n
    basis = [[int(k == j) for j in range(n)] for k in range(n)]
    basis[i] = list(v)
    gi = [[a.bilinear(basis[r], basis[s]) for s in range(n)] for r in range(n)]
    return determinant(SymForm(gi)) / determinant(a)


def prop1_check(a: SymForm) -> Prop1Report:
    """Reduce with :func:`bounded_basis` and bound the minimal-vector coordinates.

    Compares max |x_i| over minimal vectors of A.g against the integer
    ceiling of N^(N-1) * (1 + N/4)^(N/2).
    """
    from .constants import a_const

    n = a.n
    g = bounded_basis(a)
    mu = shortest_vectors(a).mu
    ag = act(a, g).scaled(1 / mu)
    mv = shortest_vectors(ag)
    maxima = tuple(max(abs(v[i]) for v in mv.vectors) for i in range(n))
    bound = a_const(n)
    values = tuple(evaluate(a, [g[r][j] for r in range(n)]) for j in range(n))
    limit = n * n * mu
    ok = max(maxima) <= bound and all(v <= limit for v in values)
    return Prop1Report(n, tuple(tuple(r) for r in g), values, limit, maxima, bound, ok)


def det_over_mu(a: SymForm) -> Fraction:
    """det(A)/mu(A)^N, a scale-invariant class invariant."""
    mu = shortest_vectors(a).mu
    return determinant(a) / mu**a.n


__all__ = [
    "MinVecSet",
    "BoundViolation",
    "Prop1Report",
    "short_vectors",
    "shortest_vectors",
    "minimum",
    "is_perfect",
    "perfection_rank",
    "bounded_basis",
    "prop1_check",
    "coordinate_ratio",
    "det_over_mu",
]
