from itertools import combinations, product

import pytest

from fingeo import enumerate_pg3, field_make, symplectic_form
from fingeo.projective import ProjPlane, normalize, null_polarity_image, null_polarity_preimage, on_plane


def span_oracle(q):
    """Lines as deduplicated spans of point pairs, built from raw vectors."""
    F = field_make(q)
    vecs = [v for v in product(range(q), repeat=4) if any(v)]
    pts = sorted({normalize(F, v) for v in vecs})
    idx = {p: i for i, p in enumerate(pts)}
    lines = set()
    for x, y in combinations(pts, 2):
        ids = set()
        for a, b in product(range(q), repeat=2):
            if a or b:
                w = tuple(F.add(F.mul(a, xi), F.mul(b, yi)) for xi, yi in zip(x, y))
                ids.add(idx[normalize(F, w)])
        lines.add(tuple(sorted(ids)))
    return pts, sorted(lines)


@pytest.mark.parametrize("q,points,lines", [(2, 15, 35), (3, 40, 130), (4, 85, 357)])
def test_counts_against_span_oracle(q, points, lines):
    pg = enumerate_pg3(q)
    pts, oracle = span_oracle(q)
    assert len(pg.points) == len(pts) == points
    assert len(pg.planes) == points
    assert [p.coords for p in pg.points] == pts
    assert [ln.point_ids for ln in pg.lines] == oracle
    assert len(oracle) == lines


@pytest.mark.parametrize("q", [2, 3, 4])
def test_incidence_counts(q):
    pg = enumerate_pg3(q)
    assert all(len(p) == q * q + q + 1 for p in pg.plane_points)
    assert all(len(ln.point_ids) == q + 1 for ln in pg.lines)
    # each line lies in q + 1 planes
    for j in range(0, len(pg.lines), 7):
        assert len(pg.planes_through_line(j)) == q + 1


def test_points_are_normalized():
    pg = enumerate_pg3(3)
    for p in pg.points:
        first = next(c for c in p.coords if c)
        assert first == 1


def test_line_through():
    pg = enumerate_pg3(2)
    j = pg.line_through(0, 1)
    assert {0, 1} <= set(pg.lines[j].point_ids)
    with pytest.raises(ValueError):
        pg.line_through(3, 3)


def test_symplectic_basics():
    F = field_make(2)
    assert symplectic_form(F, (1, 0, 0, 0), (0, 1, 0, 0)) == 1
    assert symplectic_form(F, (1, 0, 0, 0), (0, 0, 1, 0)) == 0
    for q in (2, 3, 4):
        F = field_make(q)
        for p in enumerate_pg3(q).points:
            assert symplectic_form(F, p, p) == 0


def test_symplectic_alternating_q3():
    F = field_make(3)
    pts = enumerate_pg3(3).points
    for x, y in combinations(pts[:20], 2):
        assert symplectic_form(F, x, y) == F.neg(symplectic_form(F, y, x))


def test_polarity_image_of_e0():
    F = field_make(3)
    assert null_polarity_image(F, (1, 0, 0, 0)) == ProjPlane((0, 1, 0, 0))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_every_point_absolute(q):
    F = field_make(q)
    pg = enumerate_pg3(q)
    for p in pg.points:
        plane = null_polarity_image(F, p)
        assert on_plane(F, p, plane)
        # the image plane is exactly the set of points orthogonal to p
        members = {i for i, y in enumerate(pg.points) if on_plane(F, y, plane)}
        assert members == {i for i, y in enumerate(pg.points) if symplectic_form(F, p, y) == 0}


def test_polarity_round_trip_q3():
    F = field_make(3)
    for p in enumerate_pg3(3).points:
        assert null_polarity_preimage(F, null_polarity_image(F, p)) == p


def test_normalize_rejects_zero():
    with pytest.raises(ValueError):
        normalize(field_make(2), (0, 0, 0, 0))


def test_q8_counts():
    pg = enumerate_pg3(8)
    assert (len(pg.points), len(pg.lines), len(pg.planes)) == (585, 4745, 585)
