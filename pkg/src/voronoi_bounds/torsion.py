"""Torsion in cokernels and homology: explicit bounds and exact Smith forms."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt, prod
from typing import Sequence

from .chain import ChainComplexZ, ComplexError
from .forms import rank


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, m) -> "IntMatrix":
        if isinstance(m, IntMatrix):
            return m
        entries = tuple(tuple(int(x) for x in r) for r in m)
        cols = len(entries[0]) if entries else 0
        if any(len(r) != cols for r in entries):
            raise ValueError("ragged matrix")
        return cls(len(entries), cols, entries)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.entries else ())


@dataclass(frozen=True)
class SnfResult:
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)

    @property
    def torsion_order(self) -> int:
        return prod(self.invariant_factors)


def _diagonalise(a: list[list[int]]) -> list[int]:
    """Nonzero diagonal entries after unimodular row/column elimination."""
    diag = []
    m = len(a)
    n = len(a[0]) if m else 0
    rows = list(range(m))
    cols = list(range(n))
    while rows and cols:
        best = None
        for i in rows:
            ri = a[i]
            for j in cols:
                v = ri[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        while True:
            piv = a[pi][pj]
            changed = False
            for i in rows:
                if i != pi and a[i][pj]:
                    q = a[i][pj] // piv
                    if q:
                        ri, rp = a[i], a[pi]
                        for j in cols:
                            if rp[j]:
                                ri[j] -= q * rp[j]
                    if a[i][pj]:
                        changed = True
            rp = a[pi]
            for j in cols:
                if j != pj and rp[j]:
                    q = rp[j] // piv
                    if q:
                        for i in rows:
                            if a[i][pj]:
                                a[i][j] -= q * a[i][pj]
                    if rp[j]:
                        changed = True
            if not changed:
                break
            # move to the smallest remaining entry in the pivot row/column
            cand = [(abs(a[i][pj]), i, pj) for i in rows if a[i][pj]]
            cand += [(abs(rp[j]), pi, j) for j in cols if rp[j]]
            _, pi, pj = min(cand)
        diag.append(abs(a[pi][pj]))
        rows.remove(pi)
        cols.remove(pj)
    return diag


def _normalise_chain(diag: list[int]) -> tuple[int, ...]:
    """Turn a diagonal into the divisibility chain d_1 | d_2 | ... ."""
    d = sorted(diag)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                if d[j] % d[i]:
                    g = gcd(d[i], d[j])
                    d[i], d[j] = g, d[i] * d[j] // g
                    changed = True
        d.sort()
    return tuple(d)


def smith_normal_form(m) -> SnfResult:
    """Invariant factors of an integer matrix (exact, arbitrary precision)."""
    mat = IntMatrix.of(m)
    a = [list(r) for r in mat.entries]
    return SnfResult(_normalise_chain(_diagonalise(a)))


def torsion_order(m) -> int:
    """Cardinality of the torsion subgroup of coker(M) for M : Z^cols -> Z^rows."""
    return smith_normal_form(m).torsion_order


# --- explicit bounds --------------------------------------------------------------


def _sq(v: Sequence[int]) -> int:
    return sum(x * x for x in v)


def greedy_basis_columns(m: IntMatrix) -> list[int]:
    """Columns chosen by ascending norm while they increase the rank."""
    order = sorted((j for j in range(m.cols) if any(m.column(j))), key=lambda j: (_sq(m.column(j)), j))
    chosen: list[int] = []
    vecs: list[tuple[int, ...]] = []
    target = rank(m.column(j) for j in range(m.cols))
    for j in order:
        if len(chosen) == target:
            break
        cand = vecs + [m.column(j)]
        if rank(cand) == len(cand):
            chosen.append(j)
            vecs = cand
    return chosen


def lemma1_bound(m, columns: Sequence[int] | None = None) -> int:
    """floor(prod_{i in I} ||M e_i||): an upper bound for #coker(M)_tors.

    ``m`` is the matrix of a map Z^a -> Z^b (shape b x a, columns are the
    images of basis vectors). ``columns`` must index a basis of the real span
    of the image; by default one is chosen greedily by ascending norm.
    """
    mat = IntMatrix.of(m)
    if columns is None:
        columns = greedy_basis_columns(mat)
    else:
        columns = list(columns)
        full = rank(mat.column(j) for j in range(mat.cols))
        picked = rank(mat.column(j) for j in columns)
        if picked != len(columns) or picked != full:
            raise ValueError("selected columns are not a basis of the image span")
    return isqrt(prod(_sq(mat.column(j)) for j in columns))


@dataclass(frozen=True)
class Prop3Bound:
    k: int
    a: int
    b_squared: int
    b_ceil: int
    bound: int

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "a": self.a,
            "b_squared": self.b_squared,
            "b_ceil": self.b_ceil,
            "bound": str(self.bound),
            "provenance": "exact",
        }


def prop3_bound(c: ChainComplexZ, k: int) -> Prop3Bound:
    """b(k)^a(k) with a(k) = min(#Sigma_{k+1}, #Sigma_k), b(k) = max(1, max row norm of d_{k+1}).

    b(k) is replaced by its integer ceiling so the bound stays exact and valid.
    """
    degs = c.degrees
    if not degs or k < min(degs) or k > max(degs):
        raise ComplexError(f"degree {k} outside the complex (degrees {degs})")
    a = min(c.size(k + 1), c.size(k))
    b2 = max([1] + [_sq(r) for r in c.d(k + 1)])
    b = isqrt(b2)
    if b * b < b2:
        b += 1
    return Prop3Bound(k, a, b2, b, b**a)


@dataclass(frozen=True)
class Homology:
    k: int
    betti: int
    torsion: tuple[int, ...]

    @property
    def torsion_order(self) -> int:
        return prod(self.torsion)

    def to_json(self) -> dict:
        return {"k": self.k, "betti": self.betti, "torsion": list(self.torsion)}


def homology(c: ChainComplexZ, k: int, check: bool = True) -> Homology:
    """H_k = ker d_k / im d_{k+1}: free rank and torsion invariant factors."""
    if check and not c.check_dd():
        raise ComplexError("not a chain complex: d o d != 0")
    lower = smith_normal_form(c.d(k)) if c.size(k) and c.size(k - 1) else SnfResult(())
    upper = smith_normal_form(c.d(k + 1)) if c.size(k + 1) and c.size(k) else SnfResult(())
    betti = c.size(k) - lower.rank - upper.rank
    return Homology(k, betti, upper.torsion)


def card_filtered(factors: Sequence[int], n: int) -> int:
    """Order of the part of prod(factors) supported on primes > n."""
    out = 1
    small = [p for p in range(2, n + 1) if all(p % q for q in range(2, isqrt(p) + 1))]
    for f in factors:
        f = abs(f)
        for p in small:
            while f % p == 0:
                f //= p
        out *= f
    return out


def prime_support(factors: Sequence[int]) -> set[int]:
    primes: set[int] = set()
    for f in factors:
        f = abs(f)
        p = 2
        while p * p <= f:
            while f % p == 0:
                primes.add(p)
                f //= p
            p += 1
        if f > 1:
            primes.add(f)
    return primes
