from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import fano, grid3, inversive, three_subsets_of_five
from fingeo import IncidenceStructure, build_wq, parse_inc, pg_hyperplane_design, verify_t_design, write_inc
from fingeo.constructions import elliptic_quadric, ovoid_as_structure, suzuki_tits
from fingeo.errors import DuplicateBlock, ParseError
from fingeo.incfile import read_inc, save_inc


def corpus():
    yield three_subsets_of_five()
    for q in (2, 3, 4, 8):
        yield inversive("elliptic", q)
        yield build_wq(q).structure
    yield inversive("suzuki", 8)
    for q in (2, 3, 4):
        yield pg_hyperplane_design(3, q)
    yield ovoid_as_structure(elliptic_quadric(4))
    yield ovoid_as_structure(suzuki_tits(8))
    yield fano()
    yield grid3()


def test_round_trip_corpus():
    for S in corpus():
        text = write_inc(S)
        back = parse_inc(text)
        assert back == S
        assert write_inc(back) == text


def test_golden_three_subsets(golden):
    text = (golden / "three_subsets_of_five.inc").read_text()
    S = parse_inc(text)
    assert S.b == 10 and S.v == 5
    assert str(verify_t_design(S, 3)) == "3-(5,3,1)"
    assert write_inc(S) == text


def test_metadata_round_trip():
    text = "incidence v1\npoints 3\nblocks 1\n# kind=wq q=4\n0 1\n"
    S = parse_inc(text)
    assert S.meta == {"kind": "wq", "q": "4"}
    again = parse_inc(write_inc(S))
    assert again.meta == S.meta
    assert write_inc(S) == "incidence v1\npoints 3\nblocks 1\n# kind=wq\n# q=4\n0 1\n"


def test_deterministic_bytes():
    S = build_wq(3).structure
    assert write_inc(S) == write_inc(build_wq(3).structure)
    assert write_inc(S).isascii() and "\r" not in write_inc(S)


def test_file_helpers(tmp_path):
    S = inversive("elliptic", 4)
    path = tmp_path / "i4.inc"
    save_inc(S, path)
    assert read_inc(path) == S
    assert path.read_bytes().endswith(b"\n")


BAD = [
    ("incidence v2\npoints 3\nblocks 0\n", 1),
    ("incidence v1\npoint 3\nblocks 0\n", 2),
    ("incidence v1\npoints 3\nblocks x\n", 3),
    ("incidence v1\npoints 5\nblocks 1\n0 0 1\n", 4),
    ("incidence v1\npoints 5\nblocks 1\n1 0\n", 4),
    ("incidence v1\npoints 5\nblocks 2\n0 1\n", 5),
    ("incidence v1\npoints 5\nblocks 1\n0 1\n0 2\n", 5),
    ("incidence v1\npoints 5\nblocks 1\n0  1\n", 4),
    ("incidence v1\npoints 5\nblocks 1\n# novalue\n0 1\n", 4),
    ("incidence v1\r\npoints 5\r\nblocks 0\r\n", 1),
    ("incidence v1\npoints 5\nblocks 1\n0 1 é\n", 1),
]


@pytest.mark.parametrize("text,line", BAD)
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as exc:
        parse_inc(text)
    assert exc.value.line == line
    assert str(exc.value).startswith(f"line {line}:")


def test_out_of_range_is_index_error():
    with pytest.raises(IndexError):
        parse_inc("incidence v1\npoints 5\nblocks 1\n0 1 5\n")


def test_duplicate_block():
    with pytest.raises(DuplicateBlock):
        parse_inc("incidence v1\npoints 5\nblocks 2\n0 1\n0 1\n")


def test_unsorted_blocks_accepted_and_sorted():
    S = parse_inc("incidence v1\npoints 4\nblocks 2\n2 3\n0 1\n")
    assert S.blocks == ((0, 1), (2, 3))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 8), st.data())
def test_round_trip_random(v, data):
    subsets = [c for k in range(v + 1) for c in combinations(range(v), k)]
    blocks = data.draw(st.lists(st.sampled_from(subsets), unique=True, max_size=12))
    meta = data.draw(st.dictionaries(st.from_regex(r"[a-z][a-z0-9_]{0,5}", fullmatch=True),
                                     st.from_regex(r"[A-Za-z0-9.=-]{1,6}", fullmatch=True), max_size=3))
    S = IncidenceStructure(v, tuple(blocks), meta)
    assert parse_inc(write_inc(S)) == S
