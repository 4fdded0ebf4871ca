"""Points, lines and planes of PG(3,q) together with the canonical symplectic form."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product

import numpy as np

from .gf import Field, field_make

Coords = tuple[int, int, int, int]


@dataclass(frozen=True, order=True)
class ProjPoint:
    coords: Coords


@dataclass(frozen=True, order=True)
class ProjPlane:
    dual_coords: Coords


@dataclass(frozen=True, order=True)
class ProjLine:
    point_ids: tuple[int, ...]


def normalize(F: Field, v) -> Coords:
    """Scale so the first nonzero coordinate is 1."""
    for c in v:
        if c:
            s = F.inv_table[c]
            mul = F.mul_table[s]
            return tuple(mul[x] for x in v)
    raise ValueError("the zero vector is not a projective point")


def _normalized_vectors(F: Field) -> list[Coords]:
    out = []
    for v in product(range(F.q), repeat=4):
        first = next((c for c in v if c), None)
        if first == 1:
            out.append(v)
    return out


class PG3:
    """PG(3,q) with lexicographically ordered points and planes and sorted lines."""

    def __init__(self, F: Field):
        self.field = F
        q = F.q
        vecs = _normalized_vectors(F)
        self.points = [ProjPoint(v) for v in vecs]
        self.planes = [ProjPlane(v) for v in vecs]
        self.point_index = {v: i for i, v in enumerate(vecs)}

        # plane/point incidence: sum a_i x_i == 0
        arr = np.array(vecs, dtype=np.intp)
        mul = np.array(F.mul_table, dtype=np.intp)
        add = np.array(F.add_table, dtype=np.intp)
        acc = mul[arr[:, None, 0], arr[None, :, 0]]
        for i in range(1, 4):
            acc = add[acc, mul[arr[:, None, i], arr[None, :, i]]]
        self.plane_point = acc == 0  # plane x point
        self.plane_points = [tuple(np.flatnonzero(row).tolist()) for row in self.plane_point]

        self.lines = [ProjLine(ids) for ids in self._enumerate_lines()]
        self.line_index = {ln.point_ids: i for i, ln in enumerate(self.lines)}
        n = len(vecs)
        assert n == q**3 + q**2 + q + 1

    def _enumerate_lines(self) -> list[tuple[int, ...]]:
        F = self.field
        vecs = [p.coords for p in self.points]
        n = len(vecs)
        covered = bytearray(n * n)
        lines = []
        for i in range(n):
            x = vecs[i]
            row = i * n
            for j in range(i + 1, n):
                if covered[row + j]:
                    continue
                y = vecs[j]
                ids = {j}
                for c in range(F.q):
                    mc = F.mul_table[c]
                    v = tuple(F.add_table[a][mc[b]] for a, b in zip(x, y))
                    ids.add(self.point_index[normalize(F, v)])
                ids = sorted(ids)
                for a in ids:
                    for b in ids:
                        covered[a * n + b] = 1
                lines.append(tuple(ids))
        lines.sort()
        return lines

    @property
    def q(self) -> int:
        return self.field.q

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def point_masks_of_planes(self) -> list[int]:
        return [sum(1 << i for i in pts) for pts in self.plane_points]

    @cached_property
    def line_masks(self) -> list[int]:
        return [sum(1 << i for i in ln.point_ids) for ln in self.lines]

    def planes_through_line(self, line: int) -> list[int]:
        m = self.line_masks[line]
        return [j for j, pm in enumerate(self.point_masks_of_planes) if pm & m == m]

    def line_through(self, i: int, j: int) -> int:
        """Index of the unique line through two distinct points."""
        if i == j:
            raise ValueError("points must be distinct")
        m = (1 << i) | (1 << j)
        for k, lm in enumerate(self.line_masks):
            if lm & m == m:
                return k
        raise AssertionError("two points without a joining line")

    def plane_index(self, dual: Coords) -> int:
        return self.point_index[normalize(self.field, dual)]


@lru_cache(maxsize=None)
def enumerate_pg3(F: Field | int) -> PG3:
    if isinstance(F, int):
        F = field_make(F)
    return PG3(F)


def symplectic_form(F: Field, x, y) -> int:
    """B(x,y) = x0 y1 - x1 y0 + x2 y3 - x3 y2."""
    x = x.coords if isinstance(x, ProjPoint) else x
    y = y.coords if isinstance(y, ProjPoint) else y
    m = F.mul_table
    t1 = F.sub(m[x[0]][y[1]], m[x[1]][y[0]])
    t2 = F.sub(m[x[2]][y[3]], m[x[3]][y[2]])
    return F.add(t1, t2)


def null_polarity_image(F: Field, x) -> ProjPlane:
    """The plane {y : B(x,y) = 0}."""
    x = x.coords if isinstance(x, ProjPoint) else x
    a = (F.neg(x[1]), x[0], F.neg(x[3]), x[2])
    return ProjPlane(normalize(F, a))


def null_polarity_preimage(F: Field, plane) -> ProjPoint:
    """Inverse of null_polarity_image."""
    a = plane.dual_coords if isinstance(plane, ProjPlane) else plane
    x = (a[1], F.neg(a[0]), a[3], F.neg(a[2]))
    return ProjPoint(normalize(F, x))


def on_plane(F: Field, x, plane) -> bool:
    x = x.coords if isinstance(x, ProjPoint) else x
    a = plane.dual_coords if isinstance(plane, ProjPlane) else plane
    acc = 0
    for ai, xi in zip(a, x):
        acc = F.add(acc, F.mul(ai, xi))
    return acc == 0
