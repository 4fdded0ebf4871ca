"""Generalized quadrangles: axioms, traces and spans, regularity, and GQ-ovoids."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import AxiomFailure, BudgetExceeded, CollinearPair, NonIntegralCount, NotPartialLinear
from .incidence import IncidenceStructure, bits, mask_of


@dataclass(frozen=True)
class GQView:
    structure: IncidenceStructure
    s: int
    t: int
    adj: tuple[int, ...]  # collinearity bitsets, a point is not adjacent to itself
    point_lines: tuple[tuple[int, ...], ...]

    @property
    def num_points(self) -> int:
        return self.structure.num_points

    @property
    def lines(self) -> tuple[tuple[int, ...], ...]:
        return self.structure.blocks

    @property
    def line_masks(self) -> list[int]:
        return self.structure.block_masks

    def star(self, x: int) -> int:
        return self.adj[x] | (1 << x)

    def collinear(self, x: int, y: int) -> bool:
        return x == y or bool(self.adj[x] >> y & 1)


@dataclass(frozen=True)
class TraceSpan:
    pair: tuple[int, int]
    trace: tuple[int, ...]
    span: tuple[int, ...]

    @property
    def regular(self) -> bool:
        return len(self.span) == len(self.trace)


def verify_gq(S: IncidenceStructure) -> GQView:
    """Validate S (points, lines) as a generalized quadrangle of some order (s,t)."""
    v = S.num_points
    if not S.blocks:
        raise AxiomFailure("no lines")
    line_size = len(S.blocks[0])
    for j, ln in enumerate(S.blocks):
        if len(ln) != line_size:
            raise AxiomFailure(f"lines 0 and {j} have different sizes", witness=(0, j))
    degrees = [len(pl) for pl in S.point_blocks]
    if len(set(degrees)) != 1:
        x = degrees.index(min(degrees))
        y = degrees.index(max(degrees))
        raise AxiomFailure(f"points {x} and {y} lie on different numbers of lines", witness=(x, y))
    s, t = line_size - 1, degrees[0] - 1

    owner: dict[tuple[int, int], int] = {}
    adj = [0] * v
    for j, ln in enumerate(S.blocks):
        m = S.block_masks[j]
        for i, a in enumerate(ln):
            adj[a] |= m
            for b in ln[i + 1 :]:
                prev = owner.setdefault((a, b), j)
                if prev != j:
                    raise NotPartialLinear(
                        f"points {a},{b} lie on lines {prev} and {j}", witness=(S.blocks[prev], S.blocks[j])
                    )
    adj = [m & ~(1 << x) for x, m in enumerate(adj)]

    for x in range(v):
        ax = adj[x]
        for j, lm in enumerate(S.block_masks):
            if lm >> x & 1:
                continue
            hits = (ax & lm).bit_count()
            if hits != 1:
                raise AxiomFailure(
                    f"point {x} is collinear with {hits} points of line {j}", witness=(x, S.blocks[j])
                )

    if v != (s + 1) * (s * t + 1) or S.b != (t + 1) * (s * t + 1):
        raise AxiomFailure(f"counts v={v}, b={S.b} do not fit a GQ of order ({s},{t})")
    return GQView(S, s, t, tuple(adj), tuple(tuple(pl) for pl in S.point_blocks))


def _trace_span_masks(G: GQView, x: int, y: int) -> tuple[int, int]:
    trace = G.adj[x] & G.adj[y]
    span = -1
    m = trace
    while m:
        low = m & -m
        span &= G.adj[low.bit_length() - 1]
        m ^= low
    return trace, span


def trace_span(G: GQView, x: int, y: int) -> TraceSpan:
    if G.collinear(x, y):
        raise CollinearPair(f"points {x} and {y} are collinear")
    trace, span = _trace_span_masks(G, x, y)
    ts = TraceSpan((min(x, y), max(x, y)), tuple(bits(trace)), tuple(bits(span)))
    assert len(ts.trace) == G.t + 1
    return ts


def non_collinear_pairs(G: GQView):
    full = (1 << G.num_points) - 1
    for x in range(G.num_points):
        m = full & ~G.star(x) & ~((1 << (x + 1)) - 1)
        for y in bits(m):
            yield x, y


@dataclass(frozen=True)
class RegularityReport:
    regular: bool
    regular_pairs: int
    total_pairs: int


def verify_regularity(G: GQView) -> RegularityReport:
    s, t = G.s, G.t
    total = regular = 0
    for x, y in non_collinear_pairs(G):
        total += 1
        _, span = _trace_span_masks(G, x, y)
        if span.bit_count() == t + 1:
            regular += 1
    assert 2 * total == s * s * t * (s + 1) * (s * t + 1), "non-collinear pair count disagrees with the GQ formula"
    return RegularityReport(regular == total, regular, total)


@dataclass(frozen=True)
class BipartiteCount:
    N: int
    bound: Fraction
    attains_bound: bool


def kt_bound(s: int, t: int) -> Fraction:
    return Fraction(s * s * (s + 1) * (s * t + 1), 2 * (t + 1))


def count_complete_bipartite(G: GQView, regularity: RegularityReport | None = None) -> BipartiteCount:
    """Number of induced K_{t+1,t+1} in the collinearity graph, by double counting regular pairs."""
    reg = regularity or verify_regularity(G)
    per_k = 2 * comb(G.t + 1, 2)
    if per_k == 0 or reg.regular_pairs % per_k:
        raise NonIntegralCount(f"{reg.regular_pairs} regular pairs is not a multiple of {per_k}")
    N = reg.regular_pairs // per_k
    bound = kt_bound(G.s, G.t)
    if N > bound:
        raise NonIntegralCount(f"N={N} exceeds the bound {bound}")
    return BipartiteCount(N, bound, N == bound)


def spans(G: GQView) -> list[tuple[int, int]]:
    """Distinct (span, trace) mask pairs of regular non-collinear pairs."""
    seen: dict[int, int] = {}
    for x, y in non_collinear_pairs(G):
        trace, span = _trace_span_masks(G, x, y)
        if span.bit_count() == G.t + 1:
            seen.setdefault(span, trace)
    return sorted(seen.items())


@dataclass
class StarMeetReport:
    lines_meet_stars: bool
    spans_meet_stars: bool
    partition_ok: bool | None
    num_spans: int
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.lines_meet_stars and self.spans_meet_stars and self.partition_ok is not False


def verify_line_span_star_meets(G: GQView) -> StarMeetReport:
    """Every line and every span meets every star; star(y) minus the trace partition the rest."""
    v = G.num_points
    full = (1 << v) - 1
    stars = [G.star(x) for x in range(v)]
    violations = []
    lines_ok = True
    for j, lm in enumerate(G.line_masks):
        for x in range(v):
            if not lm & stars[x]:
                lines_ok = False
                violations.append(f"line {j} misses star({x})")
    all_spans = spans(G)
    spans_ok = True
    partition_ok: bool | None = True if G.s == G.t else None
    for span, trace in all_spans:
        for x in range(v):
            hit = span & stars[x]
            if not hit:
                spans_ok = False
                violations.append(f"span {bits(span)} misses star({x})")
            elif not trace >> x & 1 and hit.bit_count() != 1:
                spans_ok = False
                violations.append(f"span {bits(span)} meets star({x}) in {hit.bit_count()} points")
        if partition_ok is None:
            continue
        union = 0
        for y in bits(span):
            part = stars[y] & ~trace
            if part.bit_count() != G.s * G.s or part & union:
                partition_ok = False
                violations.append(f"star({y}) minus trace fails the partition for span {bits(span)}")
            union |= part
        if union != full & ~trace:
            partition_ok = False
            violations.append(f"stars of span {bits(span)} do not cover the complement of its trace")
    return StarMeetReport(lines_ok, spans_ok, partition_ok, len(all_spans), violations[:20])


def verify_gq_ovoid(G: GQView, O) -> bool:
    om = mask_of(O)
    for lm in G.line_masks:
        if (lm & om).bit_count() != 1:
            return False
    pts = bits(om)
    if len(pts) != G.s * G.t + 1:
        raise AssertionError("GQ-ovoid has the wrong size")
    for x in range(G.num_points):
        meet = (G.star(x) & om).bit_count()
        if x in pts:
            if meet != 1:
                raise AssertionError(f"ovoid point {x} is collinear with another ovoid point")
        elif meet != G.t + 1:
            raise AssertionError(f"star({x}) meets the ovoid in {meet} points")
    return True


# ---------------------------------------------------------------------------
# ovoid search


def _ovoid_branch(line_masks, point_lines_masks, stars, start_point, want_all, budget):
    """DFS below a first-level choice; returns (ovoids, nodes, exhausted_budget)."""
    nlines = len(line_masks)
    all_lines = (1 << nlines) - 1
    found: list[tuple[int, ...]] = []
    nodes = 0
    chosen: list[int] = []

    def rec(blocked: int, met: int) -> bool:
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            return True
        if met == all_lines:
            found.append(tuple(sorted(chosen)))
            return not want_all
        unmet = all_lines & ~met
        branch_line = None
        m = unmet
        while m:
            low = m & -m
            j = low.bit_length() - 1
            if not line_masks[j] & ~blocked:
                return False
            if branch_line is None:
                branch_line = j
            m ^= low
        for p in bits(line_masks[branch_line] & ~blocked):
            chosen.append(p)
            stop = rec(blocked | stars[p], met | point_lines_masks[p])
            chosen.pop()
            if stop:
                return True
        return False

    chosen.append(start_point)
    rec(stars[start_point], point_lines_masks[start_point])
    over = budget is not None and nodes > budget
    return found, nodes, over


@dataclass
class OvoidSearchResult:
    mode: str
    count: int | None = None
    first: tuple[int, ...] | None = None
    ovoids: list[tuple[int, ...]] | None = None
    nodes: int = 0


def search_gq_ovoids(G: GQView, mode: str = "count_all", jobs: int = 1, budget: int | None = None) -> OvoidSearchResult:
    """Backtracking search for GQ-ovoids, branching on the lowest unmet line.

    Work is split on the points of line 0; every branch is searched to
    completion (or to the node budget) and merged in branch order, so the
    result does not depend on ``jobs``.
    """
    if mode not in ("find_one", "count_all", "enumerate"):
        raise ValueError(f"unknown search mode {mode!r}")
    line_masks = list(G.line_masks)
    plm = [mask_of(pl) for pl in G.point_lines]
    stars = [G.star(x) for x in range(G.num_points)]
    roots = list(G.lines[0])
    want_all = mode != "find_one"
    args = [(line_masks, plm, stars, p, want_all, budget) for p in roots]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_ovoid_branch, *zip(*args)))
    else:
        results = []
        for a in args:
            results.append(_ovoid_branch(*a))
            if not want_all and results[-1][0]:
                break
    if not want_all:
        hit = next((i for i, r in enumerate(results) if r[0]), len(results) - 1)
        results = results[: hit + 1]

    nodes = sum(r[1] for r in results)
    if budget is not None and (any(r[2] for r in results) or nodes > budget):
        raise BudgetExceeded(f"ovoid search exceeded {budget} nodes")
    out = OvoidSearchResult(mode, nodes=nodes)
    if mode == "find_one":
        out.first = next((r[0][0] for r in results if r[0]), None)
    else:
        everything = sorted(o for r in results for o in r[0])
        out.count = len(everything)
        if mode == "enumerate":
            out.ovoids = everything
    return out
