"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a check fails (the witness is
printed on stdout), 2 for usage and parse errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .canon import canonical_form, isomorphic
from .constructions import (
    OvoidPG,
    build_inversive_from_ovoid,
    build_wq,
    elliptic_quadric,
    ovoid_as_structure,
    pg_hyperplane_design,
    suzuki_tits,
    verify_pg_ovoid,
)
from .errors import (
    BudgetExceeded,
    DuplicateBlock,
    GeometryError,
    IndexOutOfRange,
    NotAPrimePower,
    ParseError,
    Unsupported,
)
from .gf import field_make
from .gq import count_complete_bipartite, search_gq_ovoids, verify_gq, verify_regularity
from .incfile import read_inc, write_inc
from .incidence import IncidenceStructure, check_dembowski_wagner, contract, verify_t_design
from .inversive import verify_inversive
from .reconstruct import dembowski_pipeline


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "n/a"
    if isinstance(value, (list, tuple)):
        return " ".join(map(str, value))
    return str(value)


def _report(rows) -> str:
    return "".join(f"{k}: {_fmt(v)}\n" for k, v in rows)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_bytes(text.encode("ascii"))
    else:
        sys.stdout.write(text)


def _ovoid(kind: str, q: int) -> OvoidPG:
    F = field_make(q)
    return suzuki_tits(F) if kind == "suzuki" else elliptic_quadric(F)


# -- gen ---------------------------------------------------------------------


def cmd_gen(args) -> int:
    q = args.q
    if args.what == "wq":
        S = build_wq(q).structure
    elif args.what == "ovoid-elliptic":
        S = ovoid_as_structure(_ovoid("elliptic", q))
    elif args.what == "ovoid-suzuki":
        S = ovoid_as_structure(_ovoid("suzuki", q))
    elif args.what == "inversive":
        S = build_inversive_from_ovoid(_ovoid(args.ovoid, q))
    elif args.what == "pg-design":
        S = pg_hyperplane_design(args.n, q)
    else:  # affine
        inv = build_inversive_from_ovoid(_ovoid(args.ovoid, q))
        S = contract(inv, args.point).with_meta(kind="affine", q=q, ovoid=args.ovoid, contracted_at=args.point)
    _emit(write_inc(S), args.output)
    return 0


# -- verify ------------------------------------------------------------------


def cmd_verify(args) -> int:
    S = read_inc(args.file)
    what = args.what
    if what == "design":
        p = verify_t_design(S, args.t)
        rows = [
            ("design", p),
            ("t", p.t),
            ("v", p.v),
            ("k", p.k),
            ("lambda", p.lam),
            ("lambdas", p.lambdas),
            ("b", p.b),
            ("r", p.r),
            ("symmetric", p.is_symmetric),
            ("fisher", p.fisher_ok),
        ]
        sys.stdout.write(_report(rows))
        return 0
    if what == "gq":
        G = verify_gq(S)
        sys.stdout.write(_report([("order", f"({G.s},{G.t})"), ("points", G.num_points), ("lines", S.b)]))
        return 0
    if what == "regular":
        G = verify_gq(S)
        reg = verify_regularity(G)
        kc = count_complete_bipartite(G, reg)
        rows = [
            ("order", f"({G.s},{G.t})"),
            ("regular", reg.regular),
            ("regular_pairs", reg.regular_pairs),
            ("total_pairs", reg.total_pairs),
            ("k_count", kc.N),
            ("k_bound", kc.bound),
            ("attains_bound", kc.attains_bound),
        ]
        sys.stdout.write(_report(rows))
        return 0 if reg.regular else 1
    if what == "inversive":
        I = verify_inversive(S)
        p = verify_t_design(S, 3)
        rows = [("order", I.q), ("design", p), ("circles", p.b), ("r", p.r), ("lambda2", p.lambdas[2])]
        sys.stdout.write(_report(rows))
        return 0
    if what == "pg-ovoid":
        q = args.q or int(S.meta.get("q", 0))
        if not q:
            raise ParseError(1, "ovoid file needs '# q=<q>' metadata or --q")
        if S.b != 1:
            raise ParseError(3, "ovoid file must hold exactly one block (the point set)")
        rep = verify_pg_ovoid(q, S.blocks[0])
        rows = [
            ("ok", rep.ok),
            ("size", rep.size),
            ("tangent_planes", len(rep.tangent_planes)),
            ("secant_planes", len(rep.secant_planes)),
            ("max_line_section", rep.max_line_section),
            ("tangent_lines", rep.tangent_lines),
            ("tangent_plane_per_point", rep.tangent_plane_per_point),
            ("dual_is_ovoid", rep.dual_is_ovoid),
            ("failure", rep.failure),
            ("witness", rep.witness),
        ]
        sys.stdout.write(_report(rows))
        return 0 if rep.ok else 1
    if what == "dw":
        rep = check_dembowski_wagner(S)
        rows = [
            ("design", rep.params),
            ("symmetric", rep.is_symmetric),
            ("balance_gt_one", rep.balance_gt_one),
            ("design_lines", rep.num_lines),
            ("all_lines_meet_all_blocks", rep.all_lines_meet_all_blocks),
            ("hypothesis_holds", rep.hypothesis_holds),
            ("witness", rep.witness),
        ]
        sys.stdout.write(_report(rows))
        return 0 if rep.hypothesis_holds else 1
    raise AssertionError(what)


def cmd_reconstruct(args) -> int:
    S = read_inc(args.file)
    rep = dembowski_pipeline(S, check_iso=args.check_iso, budget=args.budget)
    text = rep.to_text()
    sys.stdout.write(text)
    if args.report:
        Path(args.report).write_bytes(text.encode("ascii"))
    return 0 if rep.all_ok else 1


def cmd_search(args) -> int:
    G = verify_gq(read_inc(args.file))
    mode = "find_one" if args.first else "enumerate" if args.all else "count_all"
    res = search_gq_ovoids(G, mode, jobs=args.jobs, budget=args.budget)
    if mode == "count_all":
        sys.stdout.write(f"{res.count}\n")
    elif mode == "find_one":
        sys.stdout.write(_fmt(res.first) + "\n" if res.first else "none\n")
    else:
        for o in res.ovoids:
            sys.stdout.write(" ".join(map(str, o)) + "\n")
    return 0


def cmd_iso(args) -> int:
    A, B = read_inc(args.a), read_inc(args.b)
    ok, iso = isomorphic(A, B, budget=args.budget)
    rows = [("isomorphic", ok)]
    if iso:
        rows += [("points", iso.points), ("blocks", iso.blocks)]
    sys.stdout.write(_report(rows))
    return 0 if ok else 1


def cmd_stats(args) -> int:
    S: IncidenceStructure = read_inc(args.file)
    sizes = sorted({len(b) for b in S.blocks})
    degrees = sorted({len(p) for p in S.point_blocks})
    rows = [("points", S.v), ("blocks", S.b), ("block_sizes", sizes), ("point_degrees", degrees)]
    rows += [(f"meta.{k}", S.meta[k]) for k in sorted(S.meta)]
    if args.canonical:
        rows.append(("canonical", canonical_form(S, budget=args.budget).hex()))
    sys.stdout.write(_report(rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fingeo", description="finite geometry workbench")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a structure")
    g.add_argument("what", choices=["wq", "ovoid-elliptic", "ovoid-suzuki", "inversive", "pg-design", "affine"])
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--ovoid", choices=["elliptic", "suzuki"], default="elliptic")
    g.add_argument("--n", type=int, default=3)
    g.add_argument("--point", type=int, default=0, help="contraction point for 'affine'")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="check a structure")
    v.add_argument("what", choices=["design", "gq", "regular", "inversive", "pg-ovoid", "dw"])
    v.add_argument("file")
    v.add_argument("--t", type=int, default=2)
    v.add_argument("--q", type=int)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("reconstruct", help="run the inversive plane -> W(q) pipeline")
    r.add_argument("file")
    r.add_argument("--check-iso", action="store_true")
    r.add_argument("--report")
    r.add_argument("--budget", type=int)
    r.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("search", help="exhaustive searches")
    s.add_argument("what", choices=["gq-ovoids"])
    s.add_argument("file")
    m = s.add_mutually_exclusive_group()
    m.add_argument("--count", action="store_true")
    m.add_argument("--first", action="store_true")
    m.add_argument("--all", action="store_true")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--budget", type=int)
    s.set_defaults(func=cmd_search)

    i = sub.add_parser("iso", help="test two structures for isomorphism")
    i.add_argument("a")
    i.add_argument("b")
    i.add_argument("--budget", type=int)
    i.set_defaults(func=cmd_iso)

    st = sub.add_parser("stats", help="summary of a structure file")
    st.add_argument("file")
    st.add_argument("--canonical", action="store_true")
    st.add_argument("--budget", type=int)
    st.set_defaults(func=cmd_stats)
    return ap


def run_command(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ParseError, IndexOutOfRange, DuplicateBlock, NotAPrimePower, Unsupported, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except GeometryError as exc:
        sys.stdout.write(_report([("ok", False), ("error", type(exc).__name__), ("detail", str(exc))]))
        witness = getattr(exc, "witness", None)
        if witness is not None:
            sys.stdout.write(_report([("witness", witness)]))
        return 1


def main() -> None:
    sys.exit(run_command())
