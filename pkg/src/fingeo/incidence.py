"""Finite incidence structures and the t-design toolkit.

Blocks are kept as sorted tuples in lexicographic order, so two structures
built from the same block family compare equal regardless of input order.
Intersection-heavy routines work on Python ints used as bitsets.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb

from .errors import (
    DuplicateBlock,
    IndexOutOfRange,
    NoCommonBlock,
    NotBalanced,
    NotUniform,
)


ENUMERATION_LIMIT = 10**7


def mask_of(points) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class IncidenceStructure:
    num_points: int
    blocks: tuple[tuple[int, ...], ...]
    meta: dict[str, str] = field(default_factory=dict, hash=False)
    point_labels: tuple[str, ...] | None = field(default=None, compare=False, repr=False)
    block_labels: tuple[str, ...] | None = field(default=None, compare=False, repr=False)
    allow_repeated: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        v = self.num_points
        if v < 1:
            raise ValueError("an incidence structure needs at least one point")
        normalized = []
        for blk in self.blocks:
            t = tuple(sorted(blk))
            if len(set(t)) != len(t):
                raise ValueError(f"block {list(blk)} repeats a point")
            if t and (t[0] < 0 or t[-1] >= v):
                raise IndexOutOfRange(f"block {list(blk)} has a point outside 0..{v - 1}")
            normalized.append(t)
        order = sorted(range(len(normalized)), key=normalized.__getitem__)
        blocks = tuple(normalized[i] for i in order)
        if not self.allow_repeated:
            for a, b in zip(blocks, blocks[1:]):
                if a == b:
                    raise DuplicateBlock(a)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "meta", dict(self.meta))
        if self.block_labels is not None:
            if len(self.block_labels) != len(order):
                raise ValueError("block_labels must match the number of blocks")
            object.__setattr__(self, "block_labels", tuple(self.block_labels[i] for i in order))
        if self.point_labels is not None and len(self.point_labels) != v:
            raise ValueError("point_labels must match the number of points")

    @property
    def v(self) -> int:
        return self.num_points

    @property
    def b(self) -> int:
        return len(self.blocks)

    @cached_property
    def block_masks(self) -> list[int]:
        return [mask_of(blk) for blk in self.blocks]

    @cached_property
    def point_blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_points)]
        for j, blk in enumerate(self.blocks):
            for p in blk:
                out[p].append(j)
        return out

    @cached_property
    def point_block_masks(self) -> list[int]:
        return [mask_of(bl) for bl in self.point_blocks]

    @cached_property
    def block_index(self) -> dict[tuple[int, ...], int]:
        return {blk: j for j, blk in enumerate(self.blocks)}

    def blocks_through(self, *points: int) -> list[int]:
        m = -1
        for p in points:
            m &= self.point_block_masks[p]
        return bits(m) if points else list(range(self.b))

    def with_meta(self, **kw) -> IncidenceStructure:
        meta = dict(self.meta)
        meta.update({k: str(v) for k, v in kw.items()})
        return IncidenceStructure(
            self.num_points,
            self.blocks,
            meta,
            point_labels=self.point_labels,
            block_labels=self.block_labels,
            allow_repeated=self.allow_repeated,
        )

    def relabel(self, point_perm, block_perm=None) -> IncidenceStructure:
        """Apply point i -> point_perm[i]; block order is canonical anyway."""
        blocks = [tuple(point_perm[p] for p in blk) for blk in self.blocks]
        if block_perm is not None:
            shuffled = [None] * len(blocks)
            for j, blk in enumerate(blocks):
                shuffled[block_perm[j]] = blk
            blocks = shuffled
        return IncidenceStructure(self.num_points, tuple(blocks), dict(self.meta), allow_repeated=self.allow_repeated)


@dataclass(frozen=True)
class DesignParams:
    t: int
    v: int
    k: int
    lam: int
    lambdas: tuple[int, ...]  # lambda_s for s = 0..t
    b: int
    r: int | None
    is_symmetric: bool
    fisher_ok: bool

    def __str__(self) -> str:
        return f"{self.t}-({self.v},{self.k},{self.lam})"


def design_params(t: int, v: int, k: int, lam: int) -> DesignParams:
    """Derived parameters of a t-(v,k,lam) design; the divisions must be exact."""
    lambdas = []
    for s in range(t + 1):
        num = lam * comb(v - s, t - s)
        den = comb(k - s, t - s)
        if den == 0 or num % den:
            raise ValueError(f"lambda_{s} of a {t}-({v},{k},{lam}) design is not an integer")
        lambdas.append(num // den)
    b = lambdas[0]
    r = lambdas[1] if t > 0 else None
    if t > 0 and b * k != r * v:
        raise ValueError("bk != rv")
    # symmetric refers to the underlying 2-design, so use lambda_2
    is_symmetric = t >= 2 and k * (k - 1) == lambdas[2] * (v - 1)
    return DesignParams(t, v, k, lam, tuple(lambdas), b, r, is_symmetric, b >= v)


def verify_t_design(S: IncidenceStructure, t: int) -> DesignParams:
    """Check that S is a t-design and return its parameters.

    lambda is read off the lexicographically first t-subset; the first t-subset
    with a different count is reported as the witness.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    v = S.num_points
    if not S.blocks:
        raise NotBalanced("structure has no blocks", witness=(), count=0, expected=None)
    sizes = [len(blk) for blk in S.blocks]
    k = sizes[0]
    for j, size in enumerate(sizes):
        if size != k:
            raise NotUniform(f"blocks 0 and {j} have sizes {k} and {size}", witness=(0, j))
    if k == v:
        raise NotBalanced("degenerate design: a block contains every point", witness=S.blocks[0], count=S.b)
    if t > k:
        raise NotBalanced(f"t={t} exceeds the block size {k}", witness=tuple(range(t)), count=0)

    counts: Counter[tuple[int, ...]] = Counter()
    for blk in S.blocks:
        counts.update(combinations(blk, t))

    lam = None
    if comb(v, t) > ENUMERATION_LIMIT:
        # too many subsets to walk: trust the hash of covered subsets unless it is short
        values = set(counts.values())
        if len(counts) == comb(v, t) and len(values) == 1:
            lam = values.pop()
            return design_params(t, v, k, lam)
    for sub in combinations(range(v), t):
        c = counts.get(sub, 0)
        if lam is None:
            lam = c
            if lam < 1:
                raise NotBalanced(f"{t}-subset {list(sub)} lies in no block", witness=sub, count=0, expected=None)
        elif c != lam:
            raise NotBalanced(
                f"{t}-subset {list(sub)} lies in {c} blocks, expected {lam}", witness=sub, count=c, expected=lam
            )
    assert lam is not None
    params = design_params(t, v, k, lam)
    if params.b != S.b:
        raise AssertionError(f"block count {S.b} disagrees with derived b={params.b}")
    return params


def contract_with_map(S: IncidenceStructure, x: int) -> tuple[IncidenceStructure, list[int], list[int]]:
    """Contraction at x plus (old point of each new point, old block of each new block)."""
    if not 0 <= x < S.num_points:
        raise IndexOutOfRange(f"point {x} outside 0..{S.num_points - 1}")
    if S.num_points == 1:
        raise ValueError("cannot contract a one-point structure")
    point_of = [p for p in range(S.num_points) if p != x]
    new_id = {p: i for i, p in enumerate(point_of)}
    through = S.point_blocks[x]
    raw = [tuple(new_id[p] for p in S.blocks[j] if p != x) for j in through]
    C = IncidenceStructure(len(point_of), tuple(raw), allow_repeated=S.allow_repeated)
    # the contraction sorts its blocks; recover the origin of each one
    origin_of: dict[tuple[int, ...], list[int]] = {}
    for j, blk in zip(through, raw):
        origin_of.setdefault(blk, []).append(j)
    block_of = [origin_of[blk].pop(0) for blk in C.blocks]
    return C, point_of, block_of


def contract(S: IncidenceStructure, x: int) -> IncidenceStructure:
    return contract_with_map(S, x)[0]


def dual(S: IncidenceStructure) -> IncidenceStructure:
    """Points become blocks: point i of the dual is block i of S."""
    blocks = tuple(tuple(bl) for bl in S.point_blocks)
    return IncidenceStructure(S.b, blocks, allow_repeated=True)


def design_line(S: IncidenceStructure, x: int, y: int) -> tuple[int, ...]:
    """Intersection of all blocks containing both x and y."""
    if x == y:
        raise ValueError("design_line needs two distinct points")
    m = S.point_block_masks[x] & S.point_block_masks[y]
    if not m:
        raise NoCommonBlock(f"no block contains both {x} and {y}")
    acc = -1
    for j in bits(m):
        acc &= S.block_masks[j]
    return tuple(bits(acc))


def design_lines(S: IncidenceStructure) -> list[tuple[int, ...]]:
    """All distinct design lines, lexicographically sorted."""
    v = S.num_points
    pbm = S.point_block_masks
    bm = S.block_masks
    seen: set[int] = set()
    for x in range(v):
        for y in range(x + 1, v):
            m = pbm[x] & pbm[y]
            if not m:
                raise NoCommonBlock(f"no block contains both {x} and {y}")
            acc = -1
            while m:
                low = m & -m
                acc &= bm[low.bit_length() - 1]
                m ^= low
            seen.add(acc)
    return sorted(tuple(bits(m)) for m in seen)


@dataclass
class DWReport:
    params: DesignParams
    is_symmetric: bool
    balance_gt_one: bool
    all_lines_meet_all_blocks: bool
    num_lines: int
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    @property
    def hypothesis_holds(self) -> bool:
        return self.is_symmetric and self.balance_gt_one and self.all_lines_meet_all_blocks


def check_dembowski_wagner(S: IncidenceStructure) -> DWReport:
    """Symmetric 2-design, balance > 1, and every design line meets every block."""
    params = verify_t_design(S, 2)
    lines = design_lines(S)
    witness = None
    for ln in lines:
        lm = mask_of(ln)
        for j, bm in enumerate(S.block_masks):
            if not lm & bm:
                witness = (ln, S.blocks[j])
                break
        if witness:
            break
    return DWReport(
        params=params,
        is_symmetric=params.is_symmetric,
        balance_gt_one=params.lam > 1,
        all_lines_meet_all_blocks=witness is None,
        num_lines=len(lines),
        witness=witness,
    )


def block_intersection_matrix(S: IncidenceStructure):
    import numpy as np

    M = np.zeros((S.b, S.num_points), dtype=np.int32)
    for j, blk in enumerate(S.blocks):
        M[j, list(blk)] = 1
    return M @ M.T


def blocks_pairwise_meet(S: IncidenceStructure) -> set[int]:
    """Set of sizes |B_i & B_j| over distinct block pairs."""
    bm = S.block_masks
    return {(bm[i] & bm[j]).bit_count() for i, j in combinations(range(S.b), 2)}
