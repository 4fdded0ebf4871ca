from itertools import combinations

import pytest

from fingeo import IncidenceStructure, build_inversive_from_ovoid, elliptic_quadric, suzuki_tits

FANO_LINES = ((0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5))


def fano() -> IncidenceStructure:
    return IncidenceStructure(7, FANO_LINES)


def grid3() -> IncidenceStructure:
    rows = [tuple(3 * r + c for c in range(3)) for r in range(3)]
    cols = [tuple(3 * r + c for r in range(3)) for c in range(3)]
    return IncidenceStructure(9, tuple(rows + cols))


def three_subsets_of_five() -> IncidenceStructure:
    return IncidenceStructure(5, tuple(combinations(range(5), 3)))


def inversive(kind: str, q: int) -> IncidenceStructure:
    O = suzuki_tits(q) if kind == "suzuki" else elliptic_quadric(q)
    return build_inversive_from_ovoid(O)


@pytest.fixture(scope="session")
def i2():
    return inversive("elliptic", 2)


@pytest.fixture(scope="session")
def i4():
    return inversive("elliptic", 4)


@pytest.fixture(scope="session")
def i8s():
    return inversive("suzuki", 8)


@pytest.fixture(scope="session")
def golden():
    from pathlib import Path

    return Path(__file__).parent / "golden"
