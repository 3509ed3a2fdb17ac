"""Backtracking searches for unimodular maps between forms and vector sets."""

from __future__ import annotations

from typing import Iterator, Sequence

from ..forms import (
    SymForm,
    bareiss_det,
    canonical_sign,
    determinant,
    echelon_pivots,
    lll_reduce,
    mat_mul,
    mat_vec,
    rational_inverse,
)
from ..minima import short_vectors

Matrix = list[list[int]]


def _integer_inverse(u: Matrix) -> Matrix:
    inv = rational_inverse(u)
    return [[int(x) for x in r] for r in inv]


def isometries(a: SymForm, b: SymForm, first: bool = False) -> list[Matrix]:
    """All g in GL_n(Z) with g^t A g = B (or at most one with ``first``).

    Both forms are LLL-reduced; column i of the reduced map must be a vector
    of the reduced A with value B'_ii, and the A-inner products of the chosen
    columns must reproduce B'.
    """
    n = a.n
    if b.n != n or determinant(a) != determinant(b):
        return []
    ar, u = lll_reduce(a)
    br, w = lll_reduce(b)
    w_inv = _integer_inverse(w)
    diag = [br.rows[i][i] for i in range(n)]
    pool = short_vectors(ar, max(diag))
    by_value: dict = {}
    for val, v in pool:
        by_value.setdefault(val, []).extend([v, tuple(-x for x in v)])
    cands = [by_value.get(diag[i], []) for i in range(n)]
    if any(not c for c in cands):
        return []
    order = sorted(range(n), key=lambda i: (len(cands[i]), i))
    g_rows = ar.rows
    images = {}
    products = {}

    def a_times(v):
        key = v
        if key not in products:
            products[key] = tuple(sum(g_rows[i][j] * v[j] for j in range(n)) for i in range(n))
        return products[key]

    found: list[Matrix] = []

    def rec(depth: int) -> bool:
        if depth == n:
            gp = [[images[j][i] for j in range(n)] for i in range(n)]
            found.append(mat_mul(mat_mul(u, gp), w_inv))
            return first
        col = order[depth]
        for v in cands[col]:
            av = a_times(v)
            ok = True
            for prev in order[:depth]:
                if sum(x * y for x, y in zip(av, images[prev])) != br.rows[col][prev]:
                    ok = False
                    break
            if not ok:
                continue
            images[col] = v
            if rec(depth + 1):
                return True
            del images[col]
        return False

    rec(0)
    return [[[int(x) for x in r] for r in g] for g in found]


def _sum_outer(vs: Sequence[Sequence[int]], n: int) -> Matrix:
    s = [[0] * n for _ in range(n)]
    for v in vs:
        for i in range(n):
            if v[i]:
                for j in range(n):
                    s[i][j] += v[i] * v[j]
    return s


def _adjugate(s: Matrix) -> tuple[Matrix, int]:
    d = bareiss_det(s)
    inv = rational_inverse(s)
    return [[int(x * d) for x in r] for r in inv], d


class VectorSet:
    """A spanning set of lattice vectors up to sign, with an invariant Gram matrix.

    For S = sum v v^t the adjugate P = adj(S) is preserved (h^t P h = P up to
    the common determinant) by every h mapping the set onto itself, so the
    values v^t P w are invariants used to prune the search.
    """

    def __init__(self, vectors: Sequence[Sequence[int]]):
        self.vectors = [canonical_sign(v) for v in vectors]
        self.n = len(self.vectors[0])
        self.index = {v: i for i, v in enumerate(self.vectors)}
        s = _sum_outer(self.vectors, self.n)
        self.adj, self.det = _adjugate(s)
        pv = [mat_vec(self.adj, v) for v in self.vectors]
        self.gram = [[sum(x * y for x, y in zip(pv[i], w)) for w in self.vectors] for i in range(len(self.vectors))]
        self.basis = echelon_pivots(self.vectors)[: self.n]
        if len(self.basis) < self.n:
            raise ValueError("vector set does not span")
        self.basis_inv = rational_inverse([[self.vectors[b][i] for b in self.basis] for i in range(self.n)])
        self.fingerprint = (
            len(self.vectors),
            self.det,
            tuple(sorted(tuple(sorted(abs(x) for x in row)) for row in self.gram)),
        )

    def find(self, v) -> int | None:
        return self.index.get(canonical_sign(v))


def set_maps(src: VectorSet, dst: VectorSet, first: bool = False) -> Iterator[tuple[Matrix, list[int]]]:
    """Yield (h, perm) with h in GL_n(Z), h(+-src) = +-dst, perm[i] = index of h src_i in dst."""
    if src.fingerprint != dst.fingerprint:
        return
    n = src.n
    m = len(src.vectors)
    basis = src.basis
    signed = [(j, s) for j in range(m) for s in (1, -1)]
    chosen: list[tuple[int, int]] = []

    def rec(depth: int):
        if depth == n:
            img = [[s * dst.vectors[j][i] for j, s in chosen] for i in range(n)]
            h = mat_mul(img, src.basis_inv)
            if any(x.denominator != 1 for r in h for x in r):
                return
            h = [[int(x) for x in r] for r in h]
            perm = []
            for v in src.vectors:
                k = dst.find(mat_vec(h, v))
                if k is None:
                    return
                perm.append(k)
            yield h, perm
            return
        b = basis[depth]
        gb = src.gram[b]
        for j, s in signed:
            if dst.gram[j][j] != gb[b]:
                continue
            ok = True
            for (pj, ps), pb in zip(chosen, basis):
                if s * ps * dst.gram[j][pj] != gb[pb]:
                    ok = False
                    break
            if not ok:
                continue
            chosen.append((j, s))
            yield from rec(depth + 1)
            chosen.pop()

    for item in rec(0):
        yield item
        if first:
            return


def first_set_map(src: VectorSet, dst: VectorSet):
    return next(set_maps(src, dst, first=True), None)


def det_sign(h: Matrix) -> int:
    return bareiss_det(h)
