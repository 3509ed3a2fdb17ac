"""Facets of polyhedral cones by the double description method, exactly."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Sequence

from ..forms import echelon_pivots, rational_inverse


@dataclass(frozen=True)
class ConeFacet:
    normal: tuple[int, ...]  # inward normal, in the (possibly projected) coordinates
    incident: frozenset[int]  # indices of generators on the facet
    coords: tuple[int, ...]  # which ambient coordinates the normal refers to


def _primitive(v):
    g = reduce(gcd, (abs(x) for x in v), 0) or 1
    return tuple(x // g for x in v)


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def extreme_rays(rows: Sequence[Sequence[int]]) -> list[tuple[tuple[int, ...], int]]:
    """Extreme rays of the pointed cone {x : r . x >= 0 for every row r}.

    ``rows`` must have full column rank. Returns ``(ray, zero_mask)`` pairs
    where bit i of ``zero_mask`` is set iff ``rows[i] . ray == 0``.
    Uses the combinatorial adjacency test, so every intermediate ray is kept
    extreme.
    """
    rows = [tuple(map(int, r)) for r in rows]
    d = len(rows[0])
    init = echelon_pivots(rows)
    if len(init) != d:
        raise ValueError("constraint matrix must have full column rank")
    inv = rational_inverse([rows[i] for i in init])
    rays: list[tuple[int, ...]] = []
    masks: list[int] = []
    for j in range(d):
        col = [inv[i][j] for i in range(d)]
        den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in col), 1)
        rays.append(_primitive([int(x * den) for x in col]))
        masks.append(sum(1 << init[i] for i in range(d) if i != j))
    init_set = set(init)
    for idx, a in enumerate(rows):
        if idx in init_set:
            continue
        bit = 1 << idx
        vals = [_dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        new_rays, new_masks = [], []
        for i, v in enumerate(vals):
            if v >= 0:
                new_rays.append(rays[i])
                new_masks.append(masks[i] | (bit if v == 0 else 0))
        for p in pos:
            for q in neg:
                common = masks[p] & masks[q]
                if common.bit_count() < d - 2:
                    continue
                if any(r != p and r != q and (masks[r] & common) == common for r in range(len(rays))):
                    continue
                vp, vq = vals[p], vals[q]
                x = _primitive([vp * y - vq * z for y, z in zip(rays[q], rays[p])])
                new_rays.append(x)
                new_masks.append(common | bit)
        rays, masks = new_rays, new_masks
    return list(zip(rays, masks))


def facets_of_cone(generators: Sequence[Sequence[int]]) -> list[ConeFacet]:
    """Facets of cone(generators), each with its inward normal and incident generators.

    Works for cones that are not full-dimensional by projecting onto a set
    of coordinates that is injective on the linear span. The cone must be
    pointed (true for cones spanned by positive semidefinite rank-one forms).
    """
    gens = [tuple(map(int, g)) for g in generators]
    cols = echelon_pivots(list(zip(*gens)))
    proj = [tuple(g[c] for c in cols) for g in gens]
    out = []
    for ray, mask in extreme_rays(proj):
        incident = frozenset(i for i in range(len(gens)) if _dot(proj[i], ray) == 0)
        out.append(ConeFacet(ray, incident, tuple(cols)))
    out.sort(key=lambda f: (sorted(f.incident), f.normal))
    return out
