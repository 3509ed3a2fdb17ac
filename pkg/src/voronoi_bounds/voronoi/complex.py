"""Cells of the Voronoi decomposition modulo GL_N(Z) or SL_N(Z), and the chain complex.

Orientation bookkeeping: a cell with generators v_1 < ... < v_m (lexicographic,
sign-normalised) is oriented by the first basis of its span met when scanning
phi(v_1), phi(v_2), ... where phi(v) is the vector of upper coordinates of v v^t.
The incidence number of a facet tau of sigma is the sign of
det[phi(w), basis of tau] against sigma's orientation, w a generator of sigma
not on tau.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from ..chain import ChainComplexZ, ComplexError
from ..forms import bareiss_det, canonical_sign, echelon_pivots, rank, rank_one_coords
from .cones import facets_of_cone
from .isometry import VectorSet, set_maps
from .perfect import enumerate_perfect

log = logging.getLogger(__name__)

GROUPS = ("sl", "gl")


@dataclass
class Cell:
    generators: tuple[tuple[int, ...], ...]
    dim: int = -1
    in_boundary: bool = False
    stabilizer_order: int | None = None
    orientation_faithful: bool | None = None

    def __post_init__(self):
        gens = sorted({canonical_sign(v) for v in self.generators})
        self.generators = tuple(gens)
        self.dim = rank(rank_one_coords(v) for v in gens) - 1
        self.in_boundary = rank(gens) < len(gens[0])

    @property
    def n(self) -> int:
        return len(self.generators[0])

    def to_json(self) -> dict:
        return {
            "generators": [list(v) for v in self.generators],
            "dim": self.dim,
            "in_boundary": self.in_boundary,
            "stabilizer_order": self.stabilizer_order,
            "orientation_faithful": self.orientation_faithful,
        }


class _Oriented:
    """Span data for a cell: pivot coordinates and the reference basis."""

    def __init__(self, cell: Cell):
        self.cell = cell
        self.phi = [rank_one_coords(v) for v in cell.generators]
        self.cols = echelon_pivots(list(zip(*self.phi)))
        self.basis = echelon_pivots(self.phi)
        self.ref = self._det_raw([self.phi[i] for i in self.basis])
        if self.ref == 0:
            raise ComplexError("degenerate orientation basis")

    def _det_raw(self, vecs) -> int:
        return bareiss_det([[v[c] for c in self.cols] for v in vecs])

    def sign(self, vecs) -> int:
        """Orientation of an ordered basis of the span relative to the reference."""
        d = self._det_raw(vecs)
        if d == 0:
            raise ComplexError("vectors do not form a basis of the cell span")
        return 1 if (d > 0) == (self.ref > 0) else -1

    def action_sign(self, perm: list[int]) -> int:
        """Determinant sign of a symmetry (given by its permutation of generators) on the span."""
        return self.sign([self.phi[perm[i]] for i in self.basis])


def incidence(sigma: _Oriented, face: Cell) -> int:
    """[sigma : tau] for a facet tau, both with their reference orientations."""
    gens = sigma.cell.generators
    on_face = set(face.generators)
    outside = next(i for i, v in enumerate(gens) if v not in on_face)
    pos = {v: i for i, v in enumerate(gens)}
    tau_basis = [sigma.phi[pos[face.generators[j]]] for j in _Oriented(face).basis]
    return sigma.sign([sigma.phi[outside]] + tau_basis)


def local_dd(cell: Cell) -> dict:
    """sum_tau [sigma:tau][tau:rho] for every codimension-2 face rho (all must vanish)."""
    ori = _Oriented(cell)
    totals: dict = {}
    for f in facets_of_cone(ori.phi):
        tau = Cell([cell.generators[i] for i in f.incident])
        if tau.dim < 1:
            continue
        t_ori = _Oriented(tau)
        a = incidence(ori, tau)
        for g in facets_of_cone(t_ori.phi):
            if not g.incident:
                continue
            rho = Cell([tau.generators[i] for i in g.incident])
            totals[rho.generators] = totals.get(rho.generators, 0) + a * incidence(t_ori, rho)
    return totals


def _det(h) -> int:
    return bareiss_det(h)


def stabilizer_elements(cell: Cell, group: str = "gl"):
    vs = VectorSet(cell.generators)
    out = []
    for h, perm in set_maps(vs, vs):
        if group == "sl" and _det(h) != 1:
            continue
        out.append((h, perm))
    return out


def stabilizer(cell: Cell, group: str = "gl") -> tuple[int, bool]:
    """(order, orientation_faithful) of the stabilizer of the cell's +- vector set."""
    if group not in GROUPS:
        raise ValueError(f"group must be one of {GROUPS}")
    if cell.in_boundary:
        raise ComplexError("stabilizer search needs generators spanning R^N")
    elems = stabilizer_elements(cell, group)
    ori = _Oriented(cell)
    faithful = all(ori.action_sign(p) == 1 for _, p in elems)
    cell.stabilizer_order = len(elems)
    cell.orientation_faithful = faithful
    return len(elems), faithful


@dataclass
class _Rep:
    cell: Cell
    vs: VectorSet
    ori: _Oriented
    faithful: bool
    flip: tuple | None  # a GL stabilizer element of determinant -1, if any
    faces: list = field(default_factory=list)  # (dim-1 rep index, coefficient)
    face_count: int = 0


class _Registry:
    def __init__(self, group: str):
        self.group = group
        self.reps: dict[int, list[_Rep]] = {}

    def add(self, cell: Cell) -> int:
        vs = VectorSet(cell.generators)
        gl = list(set_maps(vs, vs))
        flip = next(((h, p) for h, p in gl if _det(h) == -1), None)
        elems = [(h, p) for h, p in gl if self.group == "gl" or _det(h) == 1]
        ori = _Oriented(cell)
        faithful = all(ori.action_sign(p) == 1 for _, p in elems)
        cell.stabilizer_order = len(elems)
        cell.orientation_faithful = faithful
        bucket = self.reps.setdefault(cell.dim, [])
        bucket.append(_Rep(cell, vs, ori, faithful, flip))
        return len(bucket) - 1

    def classify(self, cell: Cell):
        """(rep index, perm) with perm[i] = index in ``cell`` of the image of rep generator i."""
        vs = VectorSet(cell.generators)
        for idx, rep in enumerate(self.reps.get(cell.dim, [])):
            hit = next(set_maps(rep.vs, vs, first=True), None)
            if hit is None:
                continue
            h, perm = hit
            if self.group == "sl" and _det(h) == -1:
                if rep.flip is None:
                    # maybe a different map of determinant +1 exists
                    alt = next(((g, q) for g, q in set_maps(rep.vs, vs) if _det(g) == 1), None)
                    if alt is None:
                        continue
                    h, perm = alt
                else:
                    _, fp = rep.flip
                    perm = [perm[fp[i]] for i in range(len(fp))]
            return idx, perm
        return None, None


def build_complex(n: int, group: str = "sl", check: bool = True) -> ChainComplexZ:
    """The oriented, boundary-free quotient cell complex of X_N* for N <= 4."""
    group = group.lower()
    if group not in GROUPS:
        raise ValueError(f"group must be one of {GROUPS}")
    if n < 2 or n > 4:
        raise ComplexError("build_complex supports 2 <= N <= 4")
    records = enumerate_perfect(n)
    reg = _Registry(group)
    top = n * (n + 1) // 2 - 1
    flip = [[-1 if i == j == 0 else int(i == j) for j in range(n)] for i in range(n)]
    for rec in records:
        cell = Cell(rec.minvecs.vectors)
        # a GL-class may split into two SL-classes; its mirror image covers the other
        mirror = Cell([tuple(sum(flip[i][j] * v[j] for j in range(n)) for i in range(n)) for v in cell.generators])
        for c in (cell, mirror):
            idx, _ = reg.classify(c)
            if idx is None:
                reg.add(c)
    for dim in range(top, 0, -1):
        for rep in reg.reps.get(dim, []):
            gens = rep.cell.generators
            fs = facets_of_cone(rep.ori.phi)
            rep.face_count = len(fs)
            for f in fs:
                face_gens = [gens[i] for i in sorted(f.incident)]
                if not face_gens or rank(face_gens) < n:
                    continue
                face = Cell(face_gens)
                if face.dim != dim - 1:
                    raise ComplexError("facet has unexpected dimension")
                fidx, perm = reg.classify(face)
                if fidx is None:
                    fidx = reg.add(face)
                    perm = list(range(len(face.generators)))
                frep = reg.reps[dim - 1][fidx]
                inc = incidence(rep.ori, face)
                # orientation of the image of the representative versus the face's own
                face_ori = _Oriented(face)
                eps = face_ori.sign([face_ori.phi[perm[i]] for i in frep.ori.basis])
                rep.faces.append((fidx, inc * eps))
    cells: dict[int, list[str]] = {}
    keep: dict[int, list[int]] = {}
    for dim, reps in sorted(reg.reps.items()):
        keep[dim] = [i for i, r in enumerate(reps) if r.faithful and not r.cell.in_boundary]
        cells[dim] = [f"{group}{n}_d{dim}_{i}" for i in keep[dim]]
    boundary = {}
    for dim in sorted(cells):
        if dim - 1 not in cells or not cells[dim] or not cells[dim - 1]:
            continue
        pos = {j: c for c, j in enumerate(keep[dim - 1])}
        mat = []
        for i in keep[dim]:
            row = [0] * len(keep[dim - 1])
            for fidx, coef in reg.reps[dim][i].faces:
                if fidx in pos:
                    row[pos[fidx]] += coef
            mat.append(row)
        boundary[dim] = mat
    meta = {
        "n": n,
        "group": group,
        "perfect_classes": len(records),
        "orbits": {str(d): len(r) for d, r in sorted(reg.reps.items())},
        "faithful": {str(d): len(k) for d, k in sorted(keep.items())},
        "cells": {
            str(d): [reg.reps[d][i].cell.to_json() | {"faces": reg.reps[d][i].face_count} for i in keep[d]]
            for d in sorted(keep)
        },
        "max_face_count": {str(d): max((r.face_count for r in reps), default=0) for d, reps in sorted(reg.reps.items())},
    }
    cx = ChainComplexZ({d: v for d, v in cells.items() if v}, boundary, meta)
    if check and not cx.check_dd():
        raise AssertionError("d o d != 0 in the Voronoi complex")
    return cx


def count_bounds_ok(cx: ChainComplexZ) -> dict:
    """Orbit counts against c(k,N), facet counts and boundary row sums against f(k,N)."""
    from ..constants import c_const, f_const

    n = cx.meta["n"]
    out = {}
    for d, count in cx.meta["orbits"].items():
        k = int(d)
        ok = count <= c_const(k, n) and cx.meta["max_face_count"][d] <= f_const(k, n)
        rows = cx.boundary.get(k, [])
        ok = ok and all(sum(abs(x) for x in r) <= f_const(k, n) for r in rows)
        out[k] = ok
    return out
