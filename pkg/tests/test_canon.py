import random
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import fano, inversive
from fingeo import (
    IncidenceStructure,
    build_wq,
    canonical_form,
    canonical_labeling,
    isomorphic,
    pg_hyperplane_design,
)
from fingeo.canon import Isomorphism, check_isomorphism, invariants
from fingeo.errors import BudgetExceeded
from fingeo.reconstruct import stars_design


def random_relabel(S, rng):
    perm = list(range(S.v))
    rng.shuffle(perm)
    return S.relabel(perm)


def test_relabel_invariance_w2():
    S = build_wq(2).structure
    form = canonical_form(S)
    rng = random.Random(100)
    for _ in range(100):
        assert canonical_form(random_relabel(S, rng)) == form


@pytest.mark.parametrize("build", [lambda: build_wq(4).structure, lambda: inversive("suzuki", 8)])
def test_relabel_invariance_larger(build):
    S = build()
    form = canonical_form(S)
    rng = random.Random(7)
    for _ in range(5):
        assert canonical_form(random_relabel(S, rng)) == form


def test_stars_of_w2_is_hyperplane_design():
    assert canonical_form(stars_design(build_wq(2))) == canonical_form(pg_hyperplane_design(3, 2))


def test_q8_planes_not_isomorphic():
    a, b = inversive("elliptic", 8), inversive("suzuki", 8)
    # the cheap invariants agree, so the decision rests on the full forms
    assert invariants(a) == invariants(b)
    assert canonical_form(a) != canonical_form(b)
    assert isomorphic(a, b) == (False, None)


def test_isomorphic_mapping_verified():
    A = build_wq(2).structure
    rng = random.Random(1)
    B = random_relabel(A, rng)
    ok, iso = isomorphic(A, B)
    assert ok and check_isomorphism(A, B, iso)


def test_parameter_mismatch():
    plane13 = IncidenceStructure(13, tuple(tuple(sorted(((i + d) % 13 for d in (0, 1, 3, 9)))) for i in range(13)))
    assert isomorphic(fano(), plane13) == (False, None)


def test_check_isomorphism_rejects_bad_map():
    S = fano()
    ident = Isomorphism(tuple(range(7)), tuple(range(7)))
    assert check_isomorphism(S, S, ident)
    swapped = Isomorphism((1, 0) + tuple(range(2, 7)), tuple(range(7)))
    assert not check_isomorphism(S, S, swapped)


def brute_form(S):
    """Least sorted block list over all point permutations (tiny structures only)."""
    return min(tuple(sorted(tuple(sorted(p[x] for x in blk)) for blk in S.blocks)) for p in permutations(range(S.v)))


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 6), st.data())
def test_form_decides_isomorphism_like_brute_force(v, data):
    subsets = [tuple(i for i in range(v) if m >> i & 1) for m in range(1, 2**v)]
    pick = data.draw(st.lists(st.sampled_from(subsets), min_size=1, max_size=6, unique=True))
    pick2 = data.draw(st.lists(st.sampled_from(subsets), min_size=1, max_size=6, unique=True))
    A, B = IncidenceStructure(v, tuple(pick)), IncidenceStructure(v, tuple(pick2))
    same = brute_form(A) == brute_form(B)
    assert (canonical_form(A) == canonical_form(B)) == same
    assert isomorphic(A, B)[0] == same


def test_labeling_positions_are_permutations():
    lab = canonical_labeling(build_wq(3).structure)
    assert sorted(lab.point_position.tolist()) == list(range(40))
    assert sorted(lab.block_position.tolist()) == list(range(40))
    assert lab.nodes >= 1


def test_budget():
    with pytest.raises(BudgetExceeded):
        canonical_form(build_wq(4).structure, budget=2)
