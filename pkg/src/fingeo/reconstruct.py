"""From an inversive plane of even order to W(q).

The quadrangle has the points and circles of the plane as its points and one
line per pencil (the carrier together with the pencil's circles).  Its
regularity is witnessed by one K_{q+1,q+1} per pair of points, its stars form
a symmetric design, and the star map is a polarity with every point absolute.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .canon import canonical_form, isomorphic
from .constructions import build_wq
from .errors import GeometryError, OddOrder
from .gq import GQView, count_complete_bipartite, verify_gq, verify_gq_ovoid, verify_regularity
from .incidence import DesignParams, IncidenceStructure, bits, check_dembowski_wagner, mask_of, verify_t_design
from .inversive import InversivePlane, Pencil, common_tangent_circles, pencils, verify_inversive

SUPPORTED_ISO_ORDERS = (2, 4, 8)


@dataclass(frozen=True)
class WFromI:
    gq: GQView
    plane: InversivePlane
    point_map: tuple[tuple[str, int], ...]  # ("point", i) or ("circle", j)
    line_map: tuple[Pencil, ...]

    @property
    def q(self) -> int:
        return self.plane.q

    def circle_vertex(self, j: int) -> int:
        return self.plane.v + j


def build_w_from_inversive(I: InversivePlane) -> WFromI:
    q = I.q
    if q % 2:
        raise OddOrder(f"order {q} is odd")
    v, b = I.v, I.structure.b
    pens = pencils(I)
    lines = [(p.carrier,) + tuple(v + c for c in p.circles) for p in pens]
    S = IncidenceStructure(
        v + b,
        tuple(lines),
        {"kind": "w-from-inversive", "q": str(q)},
        point_labels=tuple([f"p{i}" for i in range(v)] + [f"c{j}" for j in range(b)]),
    )
    # pencil lines are born sorted by (carrier, least circle), so the order survives
    assert S.blocks == tuple(lines)

    # collinearity rules: points never collinear, point~circle iff incident, circles iff tangent
    adj = [0] * S.num_points
    for ln, lm in zip(S.blocks, S.block_masks):
        for a in ln:
            adj[a] |= lm
    adj = [m & ~(1 << x) for x, m in enumerate(adj)]
    point_part = (1 << v) - 1
    for x in range(v):
        if adj[x] & point_part:
            raise GeometryError(f"inversive point {x} is collinear with another point")
        if adj[x] >> v != I.structure.point_block_masks[x]:
            raise GeometryError(f"collinearity of point {x} disagrees with incidence")
    G = I.intersection_matrix
    for j in range(b):
        tangent = mask_of(np.flatnonzero(G[j] == 1).tolist()) & ~(1 << j)
        if adj[v + j] >> v != tangent:
            raise GeometryError(f"circle {j} is collinear with a circle it is not tangent to")

    gq = verify_gq(S)
    if (gq.s, gq.t) != (q, q):
        raise GeometryError(f"quadrangle has order ({gq.s},{gq.t}), expected ({q},{q})")
    point_map = tuple([("point", i) for i in range(v)] + [("circle", j) for j in range(b)])
    return WFromI(gq, I, point_map, tuple(pens))


def k_witness_sets(I: InversivePlane, W: WFromI) -> int:
    """One induced K_{q+1,q+1} per pair of points; returns the number of distinct sets."""
    q, v = I.q, I.v
    adj = W.gq.adj
    seen: set[int] = set()
    for e in combinations(range(v), 2):
        through = [v + c for c in I.circles_through(*e)]
        other = list(e) + [v + c for c in common_tangent_circles(I, e)]
        if len(through) != q + 1 or len(other) != q + 1:
            raise GeometryError(f"pair {e}: parts of sizes {len(other)} and {len(through)}")
        tm, om = mask_of(through), mask_of(other)
        for a in other:
            if adj[a] & om or adj[a] & tm != tm:
                raise GeometryError(f"pair {e}: vertex {a} breaks the K_{{q+1,q+1}}")
        for a in through:
            if adj[a] & tm:
                raise GeometryError(f"pair {e}: circles {a} through e are collinear")
        seen.add(tm | om)
    return len(seen)


def stars_design(G: GQView) -> IncidenceStructure:
    """Blocks are the stars of the points; block labels name the centre."""
    S = IncidenceStructure(
        G.num_points,
        tuple(tuple(bits(G.star(x))) for x in range(G.num_points)),
        {"kind": "stars", "s": str(G.s), "t": str(G.t)},
        block_labels=tuple(f"star({x})" for x in range(G.num_points)),
    )
    return S


def verify_star_polarity(G: GQView) -> bool:
    """x in star(x), y in star(x) iff x in star(y), and distinct points have distinct stars."""
    stars = [G.star(x) for x in range(G.num_points)]
    for x, sx in enumerate(stars):
        if not sx >> x & 1:
            return False
        for y in bits(sx):
            if not stars[y] >> x & 1:
                return False
    return len(set(stars)) == len(stars)


def inversive_from_gq_ovoid(G: GQView, O) -> IncidenceStructure:
    """Points of O versus stars of points off O, restricted to O."""
    O = sorted(O)
    local = {p: i for i, p in enumerate(O)}
    om = mask_of(O)
    blocks = [tuple(local[p] for p in bits(G.star(x) & om)) for x in range(G.num_points) if not om >> x & 1]
    return IncidenceStructure(len(O), tuple(blocks))


@dataclass
class PipelineReport:
    q: int | None = None
    even_order: bool | None = None
    is_inversive: bool = False
    is_gq: bool = False
    is_regular: bool = False
    k_count: int | None = None
    k_bound: int | None = None
    k_matches_n: bool = False
    stars_design_params: DesignParams | None = None
    dw_hypothesis: bool = False
    polarity_ok: bool = False
    ovoid_in_w: bool = False
    i_equals_io: bool = False
    iso_to_canonical_wq: bool | None = None
    stage_failed: str | None = None
    witnesses: list[str] = field(default_factory=list)
    note: str | None = None

    @property
    def all_ok(self) -> bool:
        if self.stage_failed is not None:
            return False
        flags = [
            self.is_inversive,
            self.is_gq,
            self.is_regular,
            self.k_matches_n,
            self.dw_hypothesis,
            self.polarity_ok,
            self.ovoid_in_w,
            self.i_equals_io,
        ]
        return all(flags) and self.iso_to_canonical_wq is not False

    def to_text(self) -> str:
        def fmt(x):
            if x is None:
                return "n/a"
            if isinstance(x, bool):
                return "true" if x else "false"
            return str(x)

        rows = [
            ("q", self.q),
            ("even_order", self.even_order),
            ("is_inversive", self.is_inversive),
            ("is_gq", self.is_gq),
            ("is_regular", self.is_regular),
            ("k_count", self.k_count),
            ("k_bound", self.k_bound),
            ("k_matches_n", self.k_matches_n),
            ("stars_design", self.stars_design_params),
            ("stars_symmetric", self.stars_design_params.is_symmetric if self.stars_design_params else None),
            ("dw_hypothesis", self.dw_hypothesis),
            ("polarity_ok", self.polarity_ok),
            ("ovoid_in_w", self.ovoid_in_w),
            ("i_equals_io", self.i_equals_io),
            ("iso_to_canonical_wq", self.iso_to_canonical_wq),
            ("stage_failed", self.stage_failed),
            ("note", self.note),
            ("all_ok", self.all_ok),
        ]
        lines = [f"{k}: {fmt(v)}" for k, v in rows]
        lines += [f"witness: {w}" for w in self.witnesses]
        return "\n".join(lines) + "\n"


def dembowski_pipeline(I_raw: IncidenceStructure, check_iso: bool = True, budget: int | None = None) -> PipelineReport:
    """Inversive plane -> pencil quadrangle -> regularity -> stars design -> polarity -> W(q)."""
    rep = PipelineReport()
    stage = "verify_inversive"
    try:
        I = verify_inversive(I_raw)
        rep.is_inversive = True
        rep.q = q = I.q
        rep.even_order = q % 2 == 0
        if not rep.even_order:
            rep.note = "odd order: unique tangent circles in pencils need even q, and W(q) has no ovoids for odd q"
            return rep

        stage = "build_w_from_inversive"
        W = build_w_from_inversive(I)
        rep.is_gq = True

        stage = "k_witness_sets"
        rep.k_count = k_witness_sets(I, W)
        bound = count_complete_bipartite(W.gq, verify_regularity(W.gq))
        rep.k_bound = int(bound.bound) if bound.bound.denominator == 1 else None
        rep.is_regular = rep.k_count == comb(q * q + 1, 2) == bound.bound
        rep.k_matches_n = rep.k_count == bound.N and bound.attains_bound

        stage = "stars_design"
        D = stars_design(W.gq)
        rep.stars_design_params = verify_t_design(D, 2)

        stage = "check_dembowski_wagner"
        dw = check_dembowski_wagner(D)
        rep.dw_hypothesis = dw.hypothesis_holds
        if dw.witness:
            rep.witnesses.append(f"design line {list(dw.witness[0])} misses block {list(dw.witness[1])}")

        stage = "verify_star_polarity"
        rep.polarity_ok = verify_star_polarity(W.gq)

        stage = "ovoid"
        ovoid = list(range(I.v))
        rep.ovoid_in_w = verify_gq_ovoid(W.gq, ovoid)
        back = inversive_from_gq_ovoid(W.gq, ovoid)
        rep.i_equals_io = back.blocks == I.structure.blocks

        if check_iso:
            stage = "iso_to_canonical_wq"
            if q in SUPPORTED_ISO_ORDERS:
                rep.iso_to_canonical_wq = isomorphic(W.gq.structure, build_wq(q).structure, budget=budget)[0]
            else:
                rep.note = f"no coordinate model compared for q={q}"
        stage = None
    except GeometryError as exc:
        rep.stage_failed = stage
        rep.witnesses.append(f"{type(exc).__name__}: {exc}")
    return rep


def round_trip_form_matches(I_raw: IncidenceStructure) -> bool:
    """I -> W -> ovoid of W -> I(O) has the canonical form of I."""
    I = verify_inversive(I_raw)
    W = build_w_from_inversive(I)
    back = inversive_from_gq_ovoid(W.gq, range(I.v))
    return canonical_form(back) == canonical_form(I_raw)
