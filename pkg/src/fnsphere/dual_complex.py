"""Delta-complexes, joins and cones, and reduced integer homology.

A d-cell (d >= 1) is stored as the ordered tuple of its d+1 faces, given as
indices into the (d-1)-cells; face j is the face opposite vertex j, so the
boundary is sum_j (-1)^j face_j.  Parallel edges and other non-simplicial
incidences are allowed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class ComplexError(ValueError):
    pass


Matrix = list[list[int]]


@dataclass(frozen=True)
class DeltaComplex:
    """``cells[0]`` is a tuple of empty tuples (one per vertex); ``cells[d]`` lists face tuples."""

    cells: tuple[tuple[tuple[int, ...], ...], ...]
    names: tuple[tuple[str, ...], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        cells = tuple(tuple(tuple(f) for f in layer) for layer in self.cells)
        while cells and not cells[-1]:
            cells = cells[:-1]
        object.__setattr__(self, "cells", cells)
        for d, layer in enumerate(cells):
            below = len(cells[d - 1]) if d else 0
            for n, faces in enumerate(layer):
                if len(faces) != (d + 1 if d else 0):
                    raise ComplexError(f"{d}-cell {n} has {len(faces)} faces, expected {d + 1 if d else 0}")
                if any(not 0 <= f < below for f in faces):
                    raise ComplexError(f"{d}-cell {n} has a face reference out of range")
        for d in range(2, len(cells)):
            if any(any(row) for row in _matmul(boundary_matrix(self, d - 1), boundary_matrix(self, d))):
                raise ComplexError(f"boundary of boundary is nonzero in dimension {d}")

    @classmethod
    def empty(cls) -> "DeltaComplex":
        return cls(())

    @property
    def dim(self) -> int:
        return len(self.cells) - 1

    def count(self, d: int) -> int:
        return len(self.cells[d]) if 0 <= d < len(self.cells) else 0

    def counts(self) -> list[int]:
        return [len(layer) for layer in self.cells]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.counts()))

    def cell_names(self) -> tuple[tuple[str, ...], ...]:
        if self.names is not None:
            return self.names
        prefix = {0: "v", 1: "e", 2: "f"}
        return tuple(
            tuple(f"{prefix.get(d, f'c{d}_')}{n}" for n in range(len(layer)))
            for d, layer in enumerate(self.cells)
        )

    def to_json(self) -> dict:
        names = self.cell_names()
        out: dict = {}
        for d, layer in enumerate(self.cells):
            if d == 0:
                out["0"] = list(names[0])
            else:
                out[str(d)] = [
                    {"id": names[d][n], "faces": [names[d - 1][f] for f in faces]}
                    for n, faces in enumerate(layer)
                ]
        return {"cells": out}

    @classmethod
    def from_json(cls, data: dict) -> "DeltaComplex":
        try:
            raw = data["cells"]
        except (KeyError, TypeError):
            raise ComplexError("complex JSON needs a 'cells' object") from None
        if not isinstance(raw, dict):
            raise ComplexError("'cells' must map dimensions to cell lists")
        try:
            dims = sorted(int(d) for d in raw)
        except ValueError:
            raise ComplexError("cell dimensions must be integer strings") from None
        if dims != list(range(len(dims))):
            raise ComplexError("cell dimensions must be 0, 1, ..., n without gaps")
        vertex_names = raw["0"]
        if not isinstance(vertex_names, list) or not all(isinstance(v, str) for v in vertex_names):
            raise ComplexError("0-cells must be a list of string ids")
        names = [tuple(vertex_names)]
        cells = [tuple(() for _ in vertex_names)]
        for d in dims[1:]:
            index = {name: n for n, name in enumerate(names[d - 1])}
            if len(index) != len(names[d - 1]):
                raise ComplexError(f"duplicate ids among {d - 1}-cells")
            layer, layer_names = [], []
            for entry in raw[str(d)]:
                try:
                    ident, faces = entry["id"], entry["faces"]
                    layer.append(tuple(index[f] for f in faces))
                except (KeyError, TypeError) as exc:
                    raise ComplexError(f"bad {d}-cell entry {entry!r}: unknown key or face {exc}") from None
                layer_names.append(str(ident))
            cells.append(tuple(layer))
            names.append(tuple(layer_names))
        return cls(tuple(cells), tuple(names))


@dataclass(frozen=True)
class HomologyProfile:
    """Reduced integer homology in degrees >= 0; only nonzero degrees are stored."""

    ranks: tuple[tuple[int, int], ...]
    torsion: tuple[tuple[int, tuple[int, ...]], ...]

    def rank(self, d: int) -> int:
        return dict(self.ranks).get(d, 0)

    def torsion_at(self, d: int) -> tuple[int, ...]:
        return dict(self.torsion).get(d, ())

    def degrees(self) -> list[int]:
        return sorted({d for d, _ in self.ranks} | {d for d, _ in self.torsion})

    @property
    def is_trivial(self) -> bool:
        return not self.ranks and not self.torsion

    def reduced_euler_characteristic(self) -> int:
        return sum((-1) ** d * r for d, r in self.ranks)

    def to_json(self) -> dict:
        return {
            "reduced": [
                {"dim": d, "rank": self.rank(d), "torsion": list(self.torsion_at(d))}
                for d in self.degrees()
            ]
        }


# ---------------------------------------------------------------- chain algebra


def boundary_matrix(K: DeltaComplex, d: int) -> Matrix:
    """Integer matrix of the boundary C_d -> C_{d-1}; rows index (d-1)-cells.

    For d = 0 this is the augmentation C_0 -> Z (a single row of ones).
    """
    if d == 0:
        return [[1] * K.count(0)]
    rows = [[0] * K.count(d) for _ in range(K.count(d - 1))]
    for col, faces in enumerate(K.cells[d] if d < len(K.cells) else ()):
        for j, f in enumerate(faces):
            rows[f][col] += -1 if j % 2 else 1
    return rows


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a or not b:
        return []
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def smith_diagonal(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix (all positive)."""
    a = [list(r) for r in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    diag: list[int] = []
    t = 0
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
            if not dirty:
                # pivot must divide the rest of the block
                bad = next(
                    ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # move the smallest remaining entry of the pivot row/column to the pivot
            cands = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
            cands += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
            _, pi, pj = min(cands)
            a[t], a[pi] = a[pi], a[t]
            for row in a:
                row[t], row[pj] = row[pj], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def reduced_homology(K: DeltaComplex) -> HomologyProfile:
    if K.count(0) == 0:
        return HomologyProfile((), ())
    top = K.dim
    factors = {d: smith_diagonal(boundary_matrix(K, d)) for d in range(0, top + 1)}
    ranks, torsion = [], []
    for d in range(0, top + 1):
        rank_out = len(factors[d])
        rank_in = len(factors.get(d + 1, []))
        free = K.count(d) - rank_out - rank_in
        tors = tuple(x for x in factors.get(d + 1, []) if x > 1)
        if free:
            ranks.append((d, free))
        if tors:
            torsion.append((d, tors))
    return HomologyProfile(tuple(ranks), tuple(torsion))


def is_homology_sphere(K: DeltaComplex, n: int) -> bool:
    h = reduced_homology(K)
    return h.ranks == ((n, 1),) and not h.torsion


# ---------------------------------------------------------------- constructions


def from_facets(vertex_sets: Iterable[Iterable[int]]) -> DeltaComplex:
    facets = [tuple(sorted(set(s))) for s in vertex_sets]
    if any(not f for f in facets):
        raise ComplexError("facets must be nonempty")
    simplices: set[tuple[int, ...]] = set()
    for f in facets:
        for r in range(1, len(f) + 1):
            simplices.update(itertools.combinations(f, r))
    top = max((len(s) for s in simplices), default=0)
    layers = [sorted(s for s in simplices if len(s) == d + 1) for d in range(top)]
    index = [{s: n for n, s in enumerate(layer)} for layer in layers]
    cells = [tuple(() for _ in layers[0])] if layers else []
    for d in range(1, top):
        cells.append(
            tuple(tuple(index[d - 1][s[:j] + s[j + 1 :]] for j in range(d + 1)) for s in layers[d])
        )
    names = None
    if layers:
        names = tuple(tuple("".join(f"v{v}" for v in s) for s in layer) for layer in layers)
    return DeltaComplex(tuple(cells), names)


_EMPTY = (-1, 0)


def _faces(K: DeltaComplex, cell: tuple[int, int]) -> list[tuple[int, int]]:
    d, n = cell
    if d == 0:
        return [_EMPTY]
    return [(d - 1, f) for f in K.cells[d][n]]


def _augmented_cells(K: DeltaComplex) -> list[tuple[int, int]]:
    return [_EMPTY] + [(d, n) for d in range(len(K.cells)) for n in range(K.count(d))]


def join(K: DeltaComplex, L: DeltaComplex) -> DeltaComplex:
    """Join with K-vertices ordered before L-vertices.

    The cell (s, t) has dimension dim s + dim t + 1; its faces are
    (face_j s, t) for the vertices of s followed by (s, face_j t).
    """
    pairs = [
        (s, t)
        for s in _augmented_cells(K)
        for t in _augmented_cells(L)
        if not (s == _EMPTY and t == _EMPTY)
    ]
    by_dim: dict[int, list] = {}
    for s, t in pairs:
        by_dim.setdefault(s[0] + t[0] + 1, []).append((s, t))
    index = {pair: n for cells in by_dim.values() for n, pair in enumerate(cells)}
    layers = []
    for d in range(max(by_dim, default=-1) + 1):
        layer = []
        for s, t in by_dim[d]:
            if d == 0:
                layer.append(())
                continue
            faces = []
            if s != _EMPTY:
                faces += [index[(fs, t)] for fs in _faces(K, s)]
            if t != _EMPTY:
                faces += [index[(s, ft)] for ft in _faces(L, t)]
            layer.append(tuple(faces))
        layers.append(tuple(layer))
    return DeltaComplex(tuple(layers))


def point() -> DeltaComplex:
    return DeltaComplex((((),),))


def cone(K: DeltaComplex) -> DeltaComplex:
    return join(point(), K)


def two_points() -> DeltaComplex:
    return DeltaComplex((((), ()),))


def hollow_triangle() -> DeltaComplex:
    return from_facets([{1, 2}, {1, 3}, {2, 3}])


def tetrahedron_boundary() -> DeltaComplex:
    return from_facets(itertools.combinations(range(1, 5), 3))


def projective_plane() -> DeltaComplex:
    """Two-vertex, three-edge, two-triangle Delta-structure on RP^2.

    Edges a, b run v -> w and c is a loop at v; the triangles are
    [v, v, w] with faces (a, b, c) and (b, a, c).
    """
    return DeltaComplex(
        (
            ((), ()),
            ((1, 0), (1, 0), (0, 0)),
            ((0, 1, 2), (1, 0, 2)),
        ),
        (("v", "w"), ("a", "b", "c"), ("U", "L")),
    )


def satisfies_simplicial_identities(K: DeltaComplex) -> bool:
    """face_i(face_j s) == face_{j-1}(face_i s) for i < j, on every cell."""
    for d in range(2, len(K.cells)):
        below = K.cells[d - 1]
        for faces in K.cells[d]:
            for i in range(d + 1):
                for j in range(i + 1, d + 1):
                    if below[faces[j]][i] != below[faces[i]][j - 1]:
                        return False
    return True


def q_boundary_model() -> DeltaComplex:
    """Two vertices joined by two edges: the boundary incidence graph of Q, a circle."""
    return DeltaComplex(
        (((), ()), ((0, 1), (0, 1))),
        (("a", "b"), ("e0", "e1")),
    )


def mprime_boundary_model(k: int) -> DeltaComplex:
    if k < 4:
        raise ComplexError(f"need k >= 4, got {k}")
    K = q_boundary_model()
    for _ in range(k - 4):
        K = join(K, q_boundary_model())
    return K


def caution_example() -> tuple[DeltaComplex, DeltaComplex]:
    """Boundary complexes of a surface X and of U = X - (D_1 u D_2), D_1 n D_2 two points."""
    return DeltaComplex.empty(), q_boundary_model()
