"""Canonical forms and isomorphism testing for incidence structures.

The structure is viewed as a bipartite graph with points and blocks kept on
separate sides.  A coloring is an ordered partition stored as dense ranks:
the vertices of color c occupy positions [start_c, start_c + |c|).  Each node
of the search tree refines its coloring, individualizes one vertex of the
largest non-singleton cell and recurses; at a discrete leaf the incidence
matrix is permuted into color order and packed into bytes.  The canonical
form is the least such byte string over all leaves, with subtrees skipped
when a known automorphism proves them equivalent to one already explored.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import BudgetExceeded
from .incidence import IncidenceStructure

DEFAULT_BUDGET = 200_000
_HASH_SEED = 0x5EED


@dataclass(frozen=True)
class CanonicalForm:
    v: int
    b: int
    certificate: bytes

    def hex(self) -> str:
        return f"{self.v}:{self.b}:{self.certificate.hex()}"


@dataclass(frozen=True)
class Labeling:
    form: CanonicalForm
    point_position: np.ndarray  # point i sits at canonical row point_position[i]
    block_position: np.ndarray
    nodes: int
    generators: int


class _Search:
    def __init__(self, S: IncidenceStructure, budget: int | None):
        v, b = S.num_points, S.b
        self.v, self.b, self.n = v, b, v + b
        src, dst = [], []
        for j, blk in enumerate(S.blocks):
            for p in blk:
                src += [p, v + j]
                dst += [v + j, p]
        self.src = np.array(src, dtype=np.intp)
        self.dst = np.array(dst, dtype=np.intp)
        self.M = np.zeros((v, b), dtype=bool)
        for j, blk in enumerate(S.blocks):
            self.M[list(blk), j] = True
        rng = np.random.default_rng(_HASH_SEED)
        self.weights = rng.integers(1, 2**31, size=(2, self.n)).astype(np.float64)
        self.budget = budget
        self.nodes = 0
        self.generators: list[np.ndarray] = []
        self.best = None  # (cert, inverse labeling, path)
        self.leaves: dict[bytes, tuple[np.ndarray, list[int]]] = {}

    # -- partitions ---------------------------------------------------------

    def refine(self, colors: np.ndarray) -> np.ndarray:
        ncolors = int(colors.max()) + 1
        while True:
            h1 = np.bincount(self.src, weights=self.weights[0][colors[self.dst]], minlength=self.n)
            h2 = np.bincount(self.src, weights=self.weights[1][colors[self.dst]], minlength=self.n)
            order = np.lexsort((h2, h1, colors))
            c, a, bb = colors[order], h1[order], h2[order]
            step = np.empty(self.n, dtype=bool)
            step[0] = False
            step[1:] = (c[1:] != c[:-1]) | (a[1:] != a[:-1]) | (bb[1:] != bb[:-1])
            rank = np.cumsum(step)
            # dense ranks index cells by their start position order
            new = np.empty(self.n, dtype=np.intp)
            new[order] = rank
            count = int(rank[-1]) + 1
            colors = new
            if count == ncolors:
                return colors
            ncolors = count

    @staticmethod
    def individualize(colors: np.ndarray, u: int) -> np.ndarray:
        key = colors * 2 + 1
        key[u] -= 1
        _, dense = np.unique(key, return_inverse=True)
        return dense.astype(np.intp)

    def target_cell(self, colors: np.ndarray) -> np.ndarray | None:
        sizes = np.bincount(colors)
        candidates = np.flatnonzero(sizes > 1)
        if candidates.size == 0:
            return None
        c = candidates[np.argmax(sizes[candidates])]
        return np.flatnonzero(colors == c)

    # -- leaves ---------------------------------------------------------------

    def certificate(self, colors: np.ndarray) -> tuple[bytes, np.ndarray]:
        inverse = np.argsort(colors)
        rows = inverse[: self.v]
        cols = inverse[self.v :] - self.v
        return np.packbits(self.M[np.ix_(rows, cols)]).tobytes(), inverse

    def orbits(self, fixed: list[int]) -> np.ndarray:
        gens = [g for g in self.generators if all(g[x] == x for x in fixed)]
        if not gens:
            return np.arange(self.n)
        rows = np.concatenate([np.arange(self.n)] * len(gens))
        cols = np.concatenate(gens)
        graph = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(self.n, self.n))
        return connected_components(graph, directed=True, connection="weak")[1]

    def is_automorphism(self, gamma: np.ndarray) -> bool:
        rows = gamma[: self.v]
        cols = gamma[self.v :] - self.v
        if rows.min() < 0 or cols.min() < 0 or rows.max() >= self.v:
            return False
        return bool(np.array_equal(self.M[np.ix_(rows, cols)], self.M))

    def leaf(self, colors: np.ndarray, path: list[int]) -> int | None:
        """Record a leaf; on a repeated certificate return the level to jump back to.

        Two leaves with equal certificates differ by an automorphism that maps
        one root-to-leaf path onto the other, so the later subtree below their
        common ancestor is an image of one already searched.
        """
        cert, inverse = self.certificate(colors)
        digest = hashlib.blake2b(cert, digest_size=20).digest()
        old = self.leaves.get(digest)
        if old is not None:
            gamma = np.empty(self.n, dtype=np.intp)
            gamma[old[0]] = inverse
            if self.is_automorphism(gamma):
                self.generators.append(gamma)
                common = 0
                for a, b in zip(old[1], path):
                    if a != b:
                        break
                    common += 1
                return common
        else:
            self.leaves[digest] = (inverse.astype(np.int32), list(path))
        if self.best is None or cert < self.best[0]:
            self.best = (cert, inverse, list(path))
        return None

    def run(self, colors: np.ndarray, path: list[int]) -> int | None:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded(f"canonical labeling exceeded {self.budget} search nodes")
        colors = self.refine(colors)
        cell = self.target_cell(colors)
        if cell is None:
            return self.leaf(colors, path)
        depth = len(path)
        explored: list[int] = []
        seen_gens = -1
        orbit = None
        for u in cell.tolist():
            if explored:
                if seen_gens != len(self.generators):
                    orbit = self.orbits(path)
                    seen_gens = len(self.generators)
                if any(orbit[u] == orbit[w] for w in explored):
                    continue
            ret = self.run(self.individualize(colors, u), path + [u])
            explored.append(u)
            if ret is not None and ret < depth:
                return ret
        return None


def canonical_labeling(S: IncidenceStructure, budget: int | None = DEFAULT_BUDGET) -> Labeling:
    search = _Search(S, budget)
    colors = np.zeros(search.n, dtype=np.intp)
    colors[S.num_points :] = 1
    if S.b == 0:
        colors = np.zeros(search.n, dtype=np.intp)
    search.run(colors, [])
    cert, inverse, _ = search.best
    position = np.empty(search.n, dtype=np.intp)
    position[inverse] = np.arange(search.n)
    form = CanonicalForm(S.num_points, S.b, cert)
    return Labeling(form, position[: S.num_points], position[S.num_points :] - S.num_points, search.nodes, len(search.generators))


def canonical_form(S: IncidenceStructure, budget: int | None = DEFAULT_BUDGET) -> CanonicalForm:
    return canonical_labeling(S, budget).form


def invariants(S: IncidenceStructure) -> tuple:
    """Cheap isomorphism invariants: sizes, degrees and pairwise block intersections."""
    bm = S.block_masks
    pairs = Counter((bm[i] & bm[j]).bit_count() for i, j in combinations(range(S.b), 2))
    return (
        S.num_points,
        S.b,
        tuple(sorted(Counter(len(blk) for blk in S.blocks).items())),
        tuple(sorted(Counter(len(pb) for pb in S.point_blocks).items())),
        tuple(sorted(pairs.items())),
    )


@dataclass(frozen=True)
class Isomorphism:
    points: tuple[int, ...]  # point i of A -> points[i] of B
    blocks: tuple[int, ...]  # block j of A -> blocks[j] of B


def check_isomorphism(A: IncidenceStructure, B: IncidenceStructure, iso: Isomorphism) -> bool:
    """Brute-force check that iso is a bijection pair preserving incidence."""
    if sorted(iso.points) != list(range(B.num_points)) or sorted(iso.blocks) != list(range(B.b)):
        return False
    for j, blk in enumerate(A.blocks):
        if tuple(sorted(iso.points[p] for p in blk)) != B.blocks[iso.blocks[j]]:
            return False
    return True


def isomorphic(
    A: IncidenceStructure, B: IncidenceStructure, budget: int | None = DEFAULT_BUDGET
) -> tuple[bool, Isomorphism | None]:
    if (A.num_points, A.b) != (B.num_points, B.b) or invariants(A) != invariants(B):
        return False, None
    la = canonical_labeling(A, budget)
    lb = canonical_labeling(B, budget)
    if la.form != lb.form:
        return False, None
    inv_pb = np.argsort(lb.point_position)
    inv_bb = np.argsort(lb.block_position)
    iso = Isomorphism(
        tuple(int(x) for x in inv_pb[la.point_position]),
        tuple(int(x) for x in inv_bb[la.block_position]),
    )
    if not check_isomorphism(A, B, iso):
        raise AssertionError("canonical labelings agree but the induced map is not an isomorphism")
    return True, iso
