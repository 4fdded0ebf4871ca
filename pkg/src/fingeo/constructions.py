"""Coordinate constructions: W(q), ovoids of PG(3,q), I(O), tangent-line GQs, hyperplane designs."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import OddOrder, Unsupported, UnsupportedOrder
from .gf import Field, field_make
from .gq import GQView, verify_gq
from .incidence import IncidenceStructure, bits, mask_of
from .projective import PG3, enumerate_pg3, symplectic_form


def _field(F: Field | int) -> Field:
    return field_make(F) if isinstance(F, int) else F


@lru_cache(maxsize=None)
def _wq_cached(q: int) -> GQView:
    F = field_make(q)
    pg = enumerate_pg3(F)
    coords = [p.coords for p in pg.points]
    lines = [
        ln.point_ids
        for ln in pg.lines
        if symplectic_form(F, coords[ln.point_ids[0]], coords[ln.point_ids[1]]) == 0
    ]
    S = IncidenceStructure(len(coords), tuple(lines), {"kind": "wq", "q": str(q)})
    return verify_gq(S)


def build_wq(F: Field | int) -> GQView:
    """W(q): all points of PG(3,q) and the totally isotropic lines of the symplectic form."""
    return _wq_cached(_field(F).q)


@dataclass(frozen=True)
class OvoidPG:
    field: Field
    point_ids: tuple[int, ...]
    kind: str
    params: dict[str, str] = field(default_factory=dict, compare=False, hash=False)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def pg(self) -> PG3:
        return enumerate_pg3(self.field)


def elliptic_b(F: Field) -> int:
    """Least b (in code order) with t^2 + t + b irreducible over F."""
    return next(b for b in range(F.q) if not F.has_root((b, 1, 1)))


def elliptic_quadric(F: Field | int) -> OvoidPG:
    """Zero set of x0 x1 + x2^2 + x2 x3 + b x3^2."""
    F = _field(F)
    pg = enumerate_pg3(F)
    b = elliptic_b(F)
    m, a = F.mul_table, F.add_table
    pts = []
    for i, p in enumerate(pg.points):
        x0, x1, x2, x3 = p.coords
        val = a[a[m[x0][x1]][m[x2][x2]]][a[m[x2][x3]][m[b][m[x3][x3]]]]
        if val == 0:
            pts.append(i)
    return OvoidPG(F, tuple(pts), "elliptic", {"b": str(b)})


def suzuki_tits(F: Field | int) -> OvoidPG:
    """{(0,0,0,1)} and {(1, x, y, x^(sigma+2) + x y + y^sigma)} with sigma: t -> t^(2^((e+1)/2))."""
    F = _field(F)
    if F.p != 2 or F.e % 2 == 0 or F.e < 3:
        raise UnsupportedOrder(f"the Suzuki-Tits ovoid needs q = 2^e with e odd and >= 3, got q={F.q}")
    pg = enumerate_pg3(F)
    sigma_exp = 2 ** ((F.e + 1) // 2)
    pts = [pg.point_index[(0, 0, 0, 1)]]
    for x in range(F.q):
        xs = F.pow(x, sigma_exp)
        for y in range(F.q):
            z = F.add(F.add(F.mul(xs, F.mul(x, x)), F.mul(x, y)), F.pow(y, sigma_exp))
            pts.append(pg.point_index[(1, x, y, z)])
    return OvoidPG(F, tuple(sorted(pts)), "suzuki_tits", {"sigma": f"t^{sigma_exp}"})


@dataclass
class PGOvoidReport:
    ok: bool
    size: int
    tangent_planes: list[int]
    secant_planes: list[int]
    max_line_section: int
    tangent_lines: int
    secant_lines: int
    tangent_plane_per_point: bool
    dual_is_ovoid: bool | None = None
    failure: str | None = None
    witness: tuple | None = None


def verify_pg_ovoid(F: Field | int, pts, check_dual: bool = True) -> PGOvoidReport:
    """Classify plane and line sections of a point set of PG(3,q)."""
    F = _field(F)
    q = F.q
    pg = enumerate_pg3(F)
    om = mask_of(pts)
    size = om.bit_count()
    tangent, secant = [], []
    failure = witness = None
    for j, pm in enumerate(pg.point_masks_of_planes):
        c = (pm & om).bit_count()
        if c == 1:
            tangent.append(j)
        elif c == q + 1:
            secant.append(j)
        elif failure is None:
            failure, witness = f"plane {j} meets the set in {c} points", ("plane", j, tuple(bits(pm & om)))

    max_sec = 0
    tl = sl = 0
    for j, lm in enumerate(pg.line_masks):
        c = (lm & om).bit_count()
        if c > max_sec:
            max_sec = c
        if c == 1:
            tl += 1
        elif c == 2:
            sl += 1
        if c > 2 and (failure is None or witness[0] == "plane"):
            failure, witness = f"line {j} meets the set in {c} points", ("line", j, tuple(bits(lm & om)))
    if size != q * q + 1 and failure is None:
        failure = f"set has {size} points, expected {q * q + 1}"

    per_point = True
    for x in bits(om):
        n = sum(1 for j in tangent if pg.point_masks_of_planes[j] >> x & 1)
        if n != 1:
            per_point = False
            if failure is None:
                failure, witness = f"point {x} lies on {n} tangent planes", ("point", x)

    dual_ok = None
    if check_dual and failure is None:
        # tangent planes, as points of the dual space, form an ovoid there
        tmask = mask_of(tangent)
        dual_ok = True
        for i in range(len(pg.points)):
            planes_through = mask_of(j for j in range(len(pg.planes)) if pg.plane_point[j, i])
            c = (planes_through & tmask).bit_count()
            if c not in (1, q + 1):
                dual_ok = False
                break
    ok = failure is None and len(tangent) == q * q + 1 and len(secant) == q**3 + q
    return PGOvoidReport(ok, size, tangent, secant, max_sec, tl, sl, per_point, dual_ok, failure, witness)


def build_inversive_from_ovoid(O: OvoidPG) -> IncidenceStructure:
    """Points of O versus its secant-plane sections (the ovals in O)."""
    rep = verify_pg_ovoid(O.field, O.point_ids, check_dual=False)
    if not rep.ok:
        raise Unsupported(f"not an ovoid: {rep.failure}")
    pg = O.pg
    local = {p: i for i, p in enumerate(O.point_ids)}
    om = mask_of(O.point_ids)
    circles = [tuple(local[p] for p in bits(pg.point_masks_of_planes[j] & om)) for j in rep.secant_planes]
    meta = {"kind": "inversive", "q": str(O.q), "ovoid": O.kind}
    return IncidenceStructure(len(O.point_ids), tuple(circles), meta)


def tangent_lines(O: OvoidPG) -> list[int]:
    om = mask_of(O.point_ids)
    return [j for j, lm in enumerate(O.pg.line_masks) if (lm & om).bit_count() == 1]


def build_tangent_line_gq(O: OvoidPG) -> GQView:
    """All points of PG(3,q) with the tangent lines of O (q even)."""
    q = O.q
    if q % 2:
        raise OddOrder(f"tangent-line quadrangle needs even q, got {q}")
    pg = O.pg
    tl = tangent_lines(O)
    assert len(tl) == (q * q + 1) * (q + 1)
    for x in O.point_ids:
        assert sum(1 for j in tl if pg.line_masks[j] >> x & 1) == q + 1
    S = IncidenceStructure(len(pg.points), tuple(pg.lines[j].point_ids for j in tl), {"kind": "tangent-gq", "q": str(q)})
    return verify_gq(S)


def pg_hyperplane_design(n: int, F: Field | int) -> IncidenceStructure:
    """Points versus planes of PG(3,q); block i is the point set of plane i."""
    if n != 3:
        raise Unsupported("only n = 3 is instantiated")
    F = _field(F)
    pg = enumerate_pg3(F)
    return IncidenceStructure(
        len(pg.points),
        tuple(pg.plane_points),
        {"kind": "pg-design", "n": "3", "q": str(F.q)},
        block_labels=tuple(f"plane{list(p.dual_coords)}" for p in pg.planes),
    )


def ovoid_as_structure(O: OvoidPG) -> IncidenceStructure:
    """One-block structure over the PG(3,q) points, used for the file format."""
    meta = {"kind": f"ovoid-{O.kind}", "q": str(O.q)}
    meta.update(O.params)
    return IncidenceStructure(len(O.pg.points), (O.point_ids,), meta)
