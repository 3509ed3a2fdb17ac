"""Perfect forms: Voronoi's neighbor walk up to GL_N(Z)-equivalence."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from ..forms import (
    FormError,
    SymForm,
    canonical_sign,
    determinant,
    evaluate,
    is_positive_definite,
    lll_reduce,
    mat_vec,
    rank_one_coords,
)
from ..minima import MinVecSet, is_perfect, shortest_vectors
from .cones import facets_of_cone
from .isometry import isometries

log = logging.getLogger(__name__)

MAX_SUPPORTED_N = 5
FLAGGED_N = 6


class VoronoiError(RuntimeError):
    pass


def initial_form(n: int) -> SymForm:
    """I + J: 2 on the diagonal, 1 elsewhere (the A_n root lattice Gram)."""
    if n < 2:
        raise FormError("N must be at least 2")
    return SymForm([[2 if i == j else 1 for j in range(n)] for i in range(n)])


@dataclass(frozen=True)
class Facet:
    normal: SymForm  # <R, v v^t> >= 0 on the cone, = 0 exactly on the facet
    vectors: tuple[tuple[int, ...], ...]  # minimal vectors on the facet
    incident: frozenset[int]  # their indices into the record's minvecs

    def value(self, v) -> Fraction:
        return evaluate(self.normal, v)

    def to_json(self) -> dict:
        return {"normal": self.normal.to_json(), "vectors": [list(v) for v in self.vectors]}


@dataclass
class PerfectFormRecord:
    form: SymForm
    minvecs: MinVecSet
    det: Fraction
    aut_order: int
    index: int
    automorphisms: list = field(default_factory=list, repr=False, compare=False)

    @property
    def pair_count(self) -> int:
        return self.minvecs.pair_count

    @classmethod
    def build(cls, form: SymForm, index: int = 0) -> "PerfectFormRecord":
        mv = shortest_vectors(form)
        auts = isometries(form, form)
        return cls(form, mv, determinant(form), len(auts), index, auts)

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "form": self.form.to_json(),
            "minvecs": self.minvecs.to_json(),
            "pair_count": self.pair_count,
            "det": str(self.det),
            "aut_order": self.aut_order,
            "provenance": "exact",
        }


def canonical_form(a: SymForm) -> SymForm:
    """Primitive integer multiple of A, LLL-reduced, then sorted by the diagonal.

    This is a consistent representative, not a full canonical form: equivalence
    is still decided by :func:`is_equivalent`.
    """
    prim, _ = a.integer_rows()
    red, _ = lll_reduce(SymForm(prim))
    n = red.n
    order = sorted(range(n), key=lambda i: (red.rows[i][i], i))
    return SymForm([[red.rows[i][j] for j in order] for i in order])


def _as_form(p) -> SymForm:
    return p.form if isinstance(p, PerfectFormRecord) else p


def facets(p) -> list[Facet]:
    """Facets of the perfect cone spanned by {v v^t : v in m(A)}."""
    a = _as_form(p)
    mv = p.minvecs if isinstance(p, PerfectFormRecord) else shortest_vectors(a)
    vecs = mv.vectors
    n = a.n
    gens = [rank_one_coords(v) for v in vecs]
    out = []
    for f in facets_of_cone(gens):
        if len(f.coords) != len(gens[0]):
            raise VoronoiError("perfect cone is not full-dimensional; form is not perfect")
        normal = SymForm.from_upper(n, f.normal)
        inc = sorted(f.incident)
        out.append(Facet(normal, tuple(vecs[i] for i in inc), frozenset(inc)))
    return out


def neighbor(p, facet: Facet) -> SymForm:
    """The perfect form A + rho R across ``facet`` (exact, not reduced).

    rho is bracketed by doubling/halving on definiteness and the minimum, then
    pinned exactly: while A + uR has a vector w of value below mu, move to
    u = (mu - A[w]) / R[w], which is where w reaches the minimum.
    """
    a = _as_form(p)
    mu = shortest_vectors(a).mu
    r = facet.normal
    lo, hi = Fraction(0), Fraction(1)
    for _ in range(4096):
        f = a + r.scaled(hi)
        if not is_positive_definite(f):
            hi = (lo + hi) / 2
            continue
        mv = shortest_vectors(f)
        if mv.mu < mu:
            break
        if mv.mu == mu and set(mv.vectors) != set(facet.vectors):
            return f
        lo, hi = hi, 2 * hi
    else:
        raise VoronoiError("neighbor search did not terminate (unbounded facet direction?)")
    u = hi
    for _ in range(4096):
        f = a + r.scaled(u)
        mv = shortest_vectors(f)
        if mv.mu == mu:
            if not is_perfect(f):
                raise VoronoiError("neighbor form is not perfect")
            return f
        w = mv.vectors[0]
        rw = evaluate(r, w)
        if rw >= 0:
            raise VoronoiError("exactness violated in neighbor refinement")
        u = (mu - evaluate(a, w)) / rw
    raise VoronoiError("neighbor refinement did not terminate")


def _value_multiset(a: SymForm, vecs) -> tuple:
    vals = sorted(abs(a.bilinear(v, w)) for i, v in enumerate(vecs) for w in vecs[i + 1 :])
    return tuple(vals)


def is_equivalent(a: SymForm, b: SymForm):
    """Some g in GL_N(Z) with g^t A g = B, or None."""
    if a.n != b.n or determinant(a) != determinant(b):
        return None
    ma, mb = shortest_vectors(a), shortest_vectors(b)
    if ma.mu != mb.mu or ma.pair_count != mb.pair_count:
        return None
    if _value_multiset(a, ma.vectors) != _value_multiset(b, mb.vectors):
        return None
    found = isometries(a, b, first=True)
    return found[0] if found else None


def _fingerprint(a: SymForm, mv: MinVecSet) -> tuple:
    return (mv.pair_count, determinant(a), mv.mu, _value_multiset(a, mv.vectors))


def _vector_perm(g, vecs, index) -> list[int]:
    return [index[canonical_sign(mat_vec(g, v))] for v in vecs]


def facet_orbits(rec: PerfectFormRecord, fs: list[Facet]) -> list[Facet]:
    """One representative facet per orbit of Aut(A)."""
    vecs = rec.minvecs.vectors
    index = {canonical_sign(v): i for i, v in enumerate(vecs)}
    perms = [_vector_perm(g, vecs, index) for g in rec.automorphisms] or [list(range(len(vecs)))]
    seen: set[frozenset[int]] = set()
    reps = []
    for f in fs:
        if f.incident in seen:
            continue
        reps.append(f)
        for pm in perms:
            seen.add(frozenset(pm[i] for i in f.incident))
    return reps


def enumerate_perfect(n: int, allow_six: bool = False) -> list[PerfectFormRecord]:
    """All perfect forms in dimension n up to equivalence and scaling."""
    if n < 2 or n > FLAGGED_N or (n == FLAGGED_N and not allow_six):
        raise FormError(f"N={n} outside the supported range 2..{MAX_SUPPORTED_N} (6 needs allow_six)")
    first = canonical_form(initial_form(n))
    records = [PerfectFormRecord.build(first, 0)]
    prints = [_fingerprint(first, records[0].minvecs)]
    queue = [records[0]]
    while queue:
        rec = queue.pop(0)
        reps = facet_orbits(rec, facets(rec))
        log.info("class %d: %d facet orbits", rec.index, len(reps))
        for f in reps:
            cand = canonical_form(neighbor(rec, f))
            mv = shortest_vectors(cand)
            fp = _fingerprint(cand, mv)
            if any(fp == q and is_equivalent(r.form, cand) is not None for q, r in zip(prints, records)):
                continue
            new = PerfectFormRecord.build(cand, len(records))
            records.append(new)
            prints.append(fp)
            queue.append(new)
    records.sort(key=lambda r: (r.pair_count, r.det, r.form.rows))
    for i, r in enumerate(records):
        r.index = i
    return records


def neighbor_is_symmetric(p, facet: Facet) -> bool:
    """Walking back across the shared facet from the neighbor returns exactly A.

    The unreduced neighbor B = A + rho R shares coordinates with A, and the
    facet's minimal vectors are minimal for B too, so the facet of B's cone
    spanned by them must lead straight back to A.
    """
    a = _as_form(p)
    b = neighbor(p, facet)
    target = {canonical_sign(v) for v in facet.vectors}
    back = [g for g in facets(b) if {canonical_sign(v) for v in g.vectors} == target]
    if len(back) != 1:
        return False
    return neighbor(b, back[0]) == a
