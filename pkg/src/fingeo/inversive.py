"""Inversive planes: contractions, parallel classes, projective closure, ovals and nuclei,
pencils, tangent circles and the common-tangent circle systems C_e."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import isqrt

import numpy as np

from .errors import (
    BadPointCount,
    NoNucleus,
    NotAffine,
    NotAnOval,
    NotBalanced,
    NotFound,
    NotUnique,
    OddOrder,
)
from .incidence import IncidenceStructure, bits, contract_with_map, mask_of, verify_t_design


@dataclass(frozen=True)
class InversivePlane:
    structure: IncidenceStructure
    q: int

    @property
    def v(self) -> int:
        return self.structure.num_points

    @property
    def circles(self) -> tuple[tuple[int, ...], ...]:
        return self.structure.blocks

    @property
    def circle_masks(self) -> list[int]:
        return self.structure.block_masks

    @cached_property
    def pair_circles(self) -> dict[tuple[int, int], tuple[int, ...]]:
        out: dict[tuple[int, int], list[int]] = {}
        for j, c in enumerate(self.circles):
            for pair in combinations(c, 2):
                out.setdefault(pair, []).append(j)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def triple_circle(self) -> dict[tuple[int, int, int], int]:
        return {tr: j for j, c in enumerate(self.circles) for tr in combinations(c, 3)}

    @cached_property
    def intersection_matrix(self) -> np.ndarray:
        M = np.zeros((self.structure.b, self.v), dtype=np.int16)
        for j, c in enumerate(self.circles):
            M[j, list(c)] = 1
        return M @ M.T

    def circles_through(self, x: int, y: int) -> tuple[int, ...]:
        return self.pair_circles[(min(x, y), max(x, y))]

    def tangent(self, c1: int, c2: int) -> bool:
        return (self.circle_masks[c1] & self.circle_masks[c2]).bit_count() == 1


def verify_inversive(S: IncidenceStructure) -> InversivePlane:
    """Check S is a 3-(q^2+1, q+1, 1) design whose contractions are affine planes of order q."""
    v = S.num_points
    q = isqrt(v - 1) if v >= 1 else 0
    if q < 2 or q * q + 1 != v:
        raise BadPointCount(f"v - 1 = {v - 1} is not a square of an integer >= 2")
    params = verify_t_design(S, 3)
    if params.k != q + 1 or params.lam != 1:
        raise NotBalanced(f"expected a 3-({v},{q + 1},1) design, got {params}")
    for x in range(v):
        C = contract_with_map(S, x)[0]
        p = verify_t_design(C, 2)
        if (p.v, p.k, p.lam) != (q * q, q, 1):
            raise NotBalanced(f"contraction at {x} is {p}, not 2-({q * q},{q},1)")
    return InversivePlane(S, q)


def parallel_classes(A: IncidenceStructure) -> list[tuple[int, ...]]:
    """Parallel classes of an affine plane, each a sorted tuple of line indices,
    ordered by least line."""
    if not A.blocks:
        raise NotAffine("no lines")
    n = len(A.blocks[0])
    if A.num_points != n * n or A.b != n * (n + 1):
        raise NotAffine(f"{A.num_points} points and {A.b} lines do not fit an affine plane of order {n}")
    lm = A.block_masks
    full = (1 << A.num_points) - 1
    assigned = [-1] * A.b
    classes = []
    for j in range(A.b):
        if assigned[j] >= 0:
            continue
        cls = [j] + [k for k in range(j + 1, A.b) if not lm[j] & lm[k]]
        for k in cls:
            if assigned[k] >= 0:
                raise NotAffine(f"line {k} is parallel to lines in two classes")
            assigned[k] = len(classes)
        union = 0
        for a, b in combinations(cls, 2):
            if lm[a] & lm[b]:
                raise NotAffine(f"lines {a} and {b} in one class intersect")
        for k in cls:
            union |= lm[k]
        if len(cls) != n or union != full:
            raise NotAffine(f"class of line {j} has {len(cls)} lines and does not partition the points")
        classes.append(tuple(cls))
    if len(classes) != n + 1:
        raise NotAffine(f"found {len(classes)} parallel classes, expected {n + 1}")
    for ca, cb in combinations(classes, 2):
        for a in ca:
            for b in cb:
                if (lm[a] & lm[b]).bit_count() != 1:
                    raise NotAffine(f"lines {a} and {b} from different classes do not meet in one point")
    return classes


@dataclass(frozen=True)
class ProjectiveClosure:
    affine: IncidenceStructure
    classes: tuple[tuple[int, ...], ...]
    infinity_points: tuple[int, ...]
    line_at_infinity: tuple[int, ...]
    plane: IncidenceStructure
    extended_line: tuple[int, ...]  # affine line index -> block index in plane
    infinity_line_index: int

    @property
    def order(self) -> int:
        return len(self.infinity_points) - 1

    def infinity_point_of_class(self, c: int) -> int:
        return self.infinity_points[c]

    def remove_infinity(self) -> IncidenceStructure:
        """Delete the line at infinity and its points."""
        v = self.affine.num_points
        blocks = [tuple(p for p in blk if p < v) for j, blk in enumerate(self.plane.blocks) if j != self.infinity_line_index]
        return IncidenceStructure(v, tuple(blocks))


def projective_closure(A: IncidenceStructure) -> ProjectiveClosure:
    classes = parallel_classes(A)
    v = A.num_points
    inf = tuple(range(v, v + len(classes)))
    raw = []
    for ci, cls in enumerate(classes):
        for j in cls:
            raw.append((j, A.blocks[j] + (inf[ci],)))
    plane = IncidenceStructure(v + len(classes), tuple(b for _, b in raw) + (inf,))
    ext = [0] * A.b
    for j, blk in raw:
        ext[j] = plane.block_index[blk]
    return ProjectiveClosure(A, tuple(classes), inf, inf, plane, tuple(ext), plane.block_index[inf])


def plane_order(P: IncidenceStructure) -> int:
    return len(P.blocks[0]) - 1


def check_oval(P: IncidenceStructure, C) -> int:
    """Raise NotAnOval unless C has n+1 points with no three collinear; returns its mask."""
    n = plane_order(P)
    pts = sorted(C)
    cm = mask_of(pts)
    if len(pts) != n + 1:
        raise NotAnOval(f"{len(pts)} points, an oval in a plane of order {n} has {n + 1}")
    for lm in P.block_masks:
        hit = lm & cm
        if hit.bit_count() > 2:
            raise NotAnOval("three collinear points", witness=tuple(bits(hit)[:3]))
    return cm


def classify_vs_oval(P: IncidenceStructure, C, line: int) -> str:
    cm = check_oval(P, C)
    c = (P.block_masks[line] & cm).bit_count()
    return ("passant", "tangent", "secant")[c]


def oval_tangents(P: IncidenceStructure, C) -> list[int]:
    """Tangent lines to an oval; checks one tangent per oval point, n+1 in total."""
    cm = check_oval(P, C)
    tangents = [j for j, lm in enumerate(P.block_masks) if (lm & cm).bit_count() == 1]
    n = plane_order(P)
    if len(tangents) != n + 1:
        raise AssertionError(f"{len(tangents)} tangents, expected {n + 1}")
    for x in bits(cm):
        if sum(1 for j in tangents if P.block_masks[j] >> x & 1) != 1:
            raise AssertionError(f"oval point {x} is not on a unique tangent")
    return tangents


def nucleus(P: IncidenceStructure, C) -> int:
    """The common point of all tangents to an oval in a plane of even order."""
    n = plane_order(P)
    if n % 2:
        raise NoNucleus(f"plane of odd order {n} has no nucleus")
    acc = -1
    for j in oval_tangents(P, C):
        acc &= P.block_masks[j]
    if acc.bit_count() != 1:
        raise NoNucleus(f"tangents meet in {acc.bit_count()} points")
    y = acc.bit_length() - 1
    if mask_of(C) >> y & 1:
        raise NoNucleus("nucleus lies on the oval")
    return y


@dataclass(frozen=True, order=True)
class Pencil:
    carrier: int
    circles: tuple[int, ...]


def pencils_at(I: InversivePlane, x: int) -> list[Pencil]:
    A, point_of, block_of = contract_with_map(I.structure, x)
    out = [Pencil(x, tuple(sorted(block_of[j] for j in cls))) for cls in parallel_classes(A)]
    return sorted(out)


def pencils(I: InversivePlane) -> list[Pencil]:
    """All pencils, ordered by carrier and then least circle."""
    out = []
    for x in range(I.v):
        out.extend(pencils_at(I, x))
    q = I.q
    assert len(out) == (q + 1) * (q * q + 1)
    return out


def pencil_is_valid(I: InversivePlane, p: Pencil) -> bool:
    full = (1 << I.v) - 1
    xm = 1 << p.carrier
    union = 0
    for c in p.circles:
        m = I.circle_masks[c]
        if not m & xm:
            return False
        rest = m & ~xm
        if rest & union:
            return False
        union |= rest
    return union == full & ~xm


def tangent_in_pencil(I: InversivePlane, p: Pencil, C: int) -> int:
    """The unique circle of pencil p meeting C in exactly one point."""
    if I.q % 2:
        raise OddOrder("tangent_in_pencil needs even order")
    cm = I.circle_masks[C]
    if cm >> p.carrier & 1 or C in p.circles:
        raise ValueError("the carrier must be off C and C must not belong to the pencil")
    hits = [d for d in p.circles if (I.circle_masks[d] & cm).bit_count() == 1]
    if not hits:
        raise NotFound(f"no circle of the pencil at {p.carrier} is tangent to circle {C}")
    if len(hits) > 1:
        raise NotUnique(f"{len(hits)} circles of the pencil are tangent to circle {C}", witness=tuple(hits))
    return hits[0]


def tangent_in_pencil_via_closure(I: InversivePlane, p: Pencil, C: int) -> int:
    """Same circle found through the point at infinity of the pencil's parallel class."""
    x = p.carrier
    A, point_of, block_of = contract_with_map(I.structure, x)
    cl = projective_closure(A)
    new_id = {old: i for i, old in enumerate(point_of)}
    oval = [new_id[y] for y in I.circles[C]]
    circle_to_line = {block_of[j]: j for j in range(A.b)}
    cls = next(ci for ci, c in enumerate(cl.classes) if circle_to_line[p.circles[0]] in c)
    inf = cl.infinity_point_of_class(cls)
    P = cl.plane
    om = mask_of(oval)
    through = [j for j in oval_tangents(P, oval) if P.block_masks[j] >> inf & 1]
    if len(through) != 1:
        raise NotUnique(f"{len(through)} tangents pass through the point at infinity")
    line = through[0]
    affine_line = cl.extended_line.index(line)
    assert om & P.block_masks[line]
    return block_of[affine_line]


def common_tangent_circles(I: InversivePlane, e) -> tuple[int, ...]:
    """C_e: circles meeting every circle through the pair e in exactly one point."""
    if I.q % 2:
        raise OddOrder("common_tangent_circles needs even order")
    x, y = sorted(e)
    if x == y:
        raise ValueError("e must be two distinct points")
    through = list(I.circles_through(x, y))
    G = I.intersection_matrix
    return tuple(np.flatnonzero(np.all(G[:, through] == 1, axis=1)).tolist())


def common_tangent_circles_by_nuclei(I: InversivePlane) -> dict[tuple[int, int], tuple[int, ...]]:
    """C_e for every pair e, computed independently through nuclei.

    For each point x and circle C missing x, C is an oval of the closure of
    the contraction at x; its nucleus y is an affine point and C lies in C_{x,y}.
    """
    if I.q % 2:
        raise OddOrder("nuclei need even order")
    out: dict[tuple[int, int], set[int]] = {pair: set() for pair in combinations(range(I.v), 2)}
    for x in range(I.v):
        A, point_of, _ = contract_with_map(I.structure, x)
        cl = projective_closure(A)
        new_id = {old: i for i, old in enumerate(point_of)}
        xm = 1 << x
        for j, cm in enumerate(I.circle_masks):
            if cm & xm:
                continue
            oval = [new_id[p] for p in I.circles[j]]
            if (cl.plane.block_masks[cl.infinity_line_index] & mask_of(oval)):
                raise AssertionError("line at infinity is not a passant")
            y_local = nucleus(cl.plane, oval)
            if y_local >= A.num_points:
                raise AssertionError("nucleus lies at infinity")
            y = point_of[y_local]
            out[(min(x, y), max(x, y))].add(j)
    return {k: tuple(sorted(v)) for k, v in out.items()}


@dataclass
class CommonTangentReport:
    pairs_checked: int
    all_size_ok: bool
    all_partition_ok: bool
    total: int
    expected_total: int | None
    witness: tuple[int, int] | None = None

    @property
    def ok(self) -> bool:
        return self.all_size_ok and self.all_partition_ok and (self.expected_total is None or self.total == self.expected_total)


def check_common_tangents(I: InversivePlane, pairs=None) -> CommonTangentReport:
    """|C_e| = q-1 and C_e partitions the complement of e, for each e in pairs (all by default)."""
    q = I.q
    exhaustive = pairs is None
    pairs = list(combinations(range(I.v), 2)) if pairs is None else [tuple(sorted(p)) for p in pairs]
    full = (1 << I.v) - 1
    size_ok = part_ok = True
    witness = None
    total = 0
    for e in pairs:
        ce = common_tangent_circles(I, e)
        total += len(ce)
        if len(ce) != q - 1:
            size_ok = False
            witness = witness or e
        em = mask_of(e)
        union = 0
        for c in ce:
            m = I.circle_masks[c]
            if m & (union | em):
                part_ok = False
                witness = witness or e
            union |= m
        if union != full & ~em:
            part_ok = False
            witness = witness or e
    expected = q * (q * q + 1) * (q * q - q) // 2 if exhaustive else None
    return CommonTangentReport(len(pairs), size_ok, part_ok, total, expected, witness)
