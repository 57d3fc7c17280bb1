"""Command line front end.

Exit codes: 0 success, 2 usage or input errors, 3 a verification
subcommand found a disagreement (distinct from a crash).
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from . import geometry
from .canonical import canonical_valuation, encode_graph, witness_frame
from .game import (
    ABELARD, ELOISE, INFINITE_RANK, TerminalWin, apply, initial_position,
    legal_moves, parse_instance, solve, validate_instance,
)
from .harness import generate_family, run_family
from .logic import (
    format_model, formula_size, holds_at, parse_formula, parse_model,
    print_formula, collect_props,
)
from .reduction import ReductionParams, compile_instance

DISAGREEMENT = 3


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(2)


def _load_instance(path: str):
    try:
        return parse_instance(_read(path))
    except ValueError as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        raise SystemExit(2)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt_rank(r) -> str:
    return "inf" if r == INFINITE_RANK else str(int(r))


def cmd_solve(args) -> int:
    inst = _load_instance(args.instance)
    for issue in validate_instance(inst):
        print(f"warning: {issue}", file=sys.stderr)
    result = solve(inst)
    rank0 = result.rank[initial_position(inst)]
    winner = "Eloise" if result.winner == ELOISE else "Abelard"
    print(f"winner: {winner}, rank: {_fmt_rank(rank0)}")
    for state in result.rank:
        if isinstance(state, TerminalWin):
            continue
        who = "E" if state.player == ELOISE else "A"
        row = ",".join(state.last_row)
        print(f"  {who} [{row}] col={state.next_column} rank={_fmt_rank(result.rank[state])}")
    return 0


def cmd_compile(args) -> int:
    inst = _load_instance(args.instance)
    phi = compile_instance(inst, strict_abelard=args.strict_abelard)
    params = ReductionParams.for_instance(inst)
    text = print_formula(phi) + "\n"
    text += f"# size={formula_size(phi)}\n"
    text += f"# props={len(collect_props(phi))}\n"
    text += f"# b={params.b} N={params.N} L={params.L}\n"
    _emit(text, args.output)
    return 0


def cmd_model(args) -> int:
    inst = _load_instance(args.instance)
    result = solve(inst)
    graph = encode_graph(inst, result)
    wf = witness_frame(graph)
    model = canonical_valuation(inst, graph, result, frame=wf)
    text = f"# root {wf.node_map[graph.root]}\n" + format_model(model)
    _emit(text, args.output)
    return 0


def cmd_check(args) -> int:
    model = parse_model(_read(args.model))
    try:
        phi = parse_formula(_read(args.formula))
    except ValueError as exc:
        print(f"error: {args.formula}: {exc}", file=sys.stderr)
        return 2
    points = args.at.split(",") if args.at else sorted(model.frame.points, key=str)
    for p in points:
        try:
            verdict = holds_at(model, phi, p)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(f"{p}: {'true' if verdict else 'false'}")
    return 0


def _parse_family(spec: str) -> list:
    n_values, s_values = (1, 2), (0, 1)
    for clause in spec.split(","):
        clause = clause.strip()
        if not clause:
            continue
        if clause.startswith("n<="):
            n_values = tuple(range(1, int(clause[3:]) + 1))
        elif clause.startswith("n="):
            n_values = (int(clause[2:]),)
        elif clause.startswith("s<="):
            s_values = tuple(range(0, int(clause[3:]) + 1))
        elif clause.startswith("s="):
            s_values = (int(clause[2:]),)
        else:
            raise ValueError(f"cannot parse family clause {clause!r}")
    return generate_family(n_values, s_values)


def cmd_e2e(args) -> int:
    try:
        family = _parse_family(args.family)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    reports = run_family(family, strict_abelard=args.strict_abelard)
    disagreements = 0
    for r in reports:
        mark = "ok" if r.agree else "MISMATCH"
        if not r.agree:
            disagreements += 1
        winner = "Eloise" if r.winner == ELOISE else "Abelard"
        print(f"{r.label}  winner={winner:7s} rank={_fmt_rank(r.rank):>4s} "
              f"formula={'sat' if r.verdict else 'unsat'}  {mark}")
    total = len(reports)
    agreeing = total - disagreements
    pct = 100.0 * agreeing / total if total else 100.0
    print(f"agreements: {pct:.0f}% ({agreeing}/{total})")
    return 0 if disagreements == 0 else DISAGREEMENT


def cmd_geometry_verify(args) -> int:
    depth = args.depth
    related = geometry.tilde_relation(depth, args.mode)
    expected = {geometry._pair_key(a, b) for a, b in geometry.tree_adjacency(depth)}
    nodes = geometry._all_nodes(depth)
    pairs = len(nodes) * (len(nodes) - 1) // 2
    mismatches = related ^ expected
    print(f"pairs checked: {pairs}, mismatches: {len(mismatches)}")
    for a, b in sorted(mismatches):
        kind = "missing" if (a, b) in expected else "extra"
        print(f"  {kind}: {a!r} ~ {b!r}")
    print("certificates:")
    w = geometry.Disc(geometry.QPoint(Fraction(-1, 4), Fraction(1, 2)), Fraction(4, 9), geometry.OPEN)
    for label, value, bound, want_less in (
        ("witness contains root", geometry.dist2(w.center, geometry.embed_node("")), w.radius_sq, True),
        ("witness contains child 1", geometry.dist2(w.center, geometry.embed_node("1")), w.radius_sq, True),
        ("clearance line y=x+2", geometry.dist2_to_obstacle(w.center, geometry.Line(2)), w.radius_sq, False),
        ("clearance ray (1/2,1/2)", geometry.dist2_to_obstacle(w.center, geometry.Ray(geometry.QPoint(Fraction(1, 2), Fraction(1, 2)))), w.radius_sq, False),
        ("clearance ray (1/4,5/4)", geometry.dist2_to_obstacle(w.center, geometry.Ray(geometry.QPoint(Fraction(1, 4), Fraction(5, 4)))), w.radius_sq, False),
    ):
        rel = "<" if want_less else ">"
        ok = value < bound if want_less else value > bound
        print(f"  {label}: {value} {rel} {bound}  {'ok' if ok else 'FAIL'}")
    centre = geometry.QPoint(Fraction(-7, 32), Fraction(23, 32))
    r2 = Fraction(289, 512)
    checks = [
        ("circle through origin", geometry.dist2(centre, geometry.QPoint(0, 0)) == r2),
        ("circle through (1/2,1/2)", geometry.dist2(centre, geometry.QPoint(Fraction(1, 2), Fraction(1, 2))) == r2),
        ("circle tangent to y=x+2", geometry.dist2_to_obstacle(centre, geometry.Line(2)) == r2),
        ("node 10 outside", geometry.dist2(centre, geometry.embed_node("10")) > r2),
        ("node 11 outside", geometry.dist2(centre, geometry.embed_node("11")) > r2),
    ]
    for label, ok in checks:
        print(f"  {label}: {'ok' if ok else 'FAIL'}")
    bad = len(mismatches) or any(not ok for _, ok in checks)
    return DISAGREEMENT if bad else 0


def cmd_geometry_lemma(args) -> int:
    rng = random.Random(args.seed)
    violations = 0
    for _ in range(args.trials):
        if not _random_lemma_trial(rng):
            violations += 1
    print(f"trials: {args.trials}, violations: {violations}")
    return DISAGREEMENT if violations else 0


def _random_lemma_trial(rng: random.Random) -> bool:
    """One seeded configuration: rational circle, four cyclic points,
    a disc containing the first and third."""
    cx = Fraction(rng.randint(-8, 8), rng.randint(1, 8))
    cy = Fraction(rng.randint(-8, 8), rng.randint(1, 8))
    radius = Fraction(rng.randint(1, 12), rng.randint(1, 6))
    center = geometry.QPoint(cx, cy)
    params = sorted(rng.sample(range(-60, 60), 4))
    pts = []
    for h in params:
        t = Fraction(h, 10)
        den = 1 + t * t
        pts.append(geometry.QPoint(cx + radius * (1 - t * t) / den,
                                   cy + radius * 2 * t / den))
    a, b, c, d = pts
    mx, my = (a.x + c.x) / 2, (a.y + c.y) / 2
    ux, uy = c.x - a.x, c.y - a.y
    shift = Fraction(rng.randint(-20, 20), 16)
    centre2 = geometry.QPoint(mx - shift * uy, my + shift * ux)
    r2 = geometry.dist2(centre2, a) + Fraction(rng.randint(0, 8), 4)
    disc = geometry.Disc(centre2, r2, geometry.CLOSED)
    return geometry.circle_lemma_check(center, radius * radius, a, b, c, d, disc)


def cmd_play(args) -> int:
    inst = _load_instance(args.instance)
    result = solve(inst)
    pos = initial_position(inst)
    print("you play first; place the target tile in column 1 to win")
    while True:
        row = ",".join(pos.last_row)
        print(f"row [{row}]  next column {pos.next_column}")
        options = legal_moves(inst, pos)
        if not options:
            # a stuck player, either one, hands the win to the opponent side
            mover = "you are" if pos.player == ELOISE else "the opponent is"
            print(f"{mover} stuck: you lose")
            return 0
        if pos.player == ELOISE:
            try:
                choice = input(f"your tile {options}> ").strip()
            except EOFError:
                print("bye")
                return 0
            if choice in ("q", "quit", "exit"):
                return 0
            if choice not in options:
                print("not a legal move")
                continue
        else:
            ranked = [(result.rank[apply(inst, pos, t)], k, t)
                      for k, t in enumerate(options)]
            ranked.sort(key=lambda item: (-item[0], item[1]))
            choice = ranked[0][2]
            print(f"opponent plays {choice}")
        nxt = apply(inst, pos, choice)
        if isinstance(nxt, TerminalWin):
            mover = "you" if pos.player == ELOISE else "the opponent"
            print(f"{mover} placed the target in column 1: you win!")
            return 0
        pos = nxt


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tilelogic")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="winner and rank table for an instance")
    sp.add_argument("instance")
    sp.set_defaults(fn=cmd_solve)

    sp = sub.add_parser("compile", help="emit the instance's formula with stats")
    sp.add_argument("instance")
    sp.add_argument("--strict-abelard", action="store_true",
                    help="also require complete opponent branching in the last column")
    sp.add_argument("-o", "--output")
    sp.set_defaults(fn=cmd_compile)

    sp = sub.add_parser("model", help="emit the canonical model of an instance")
    sp.add_argument("instance")
    sp.add_argument("-o", "--output")
    sp.set_defaults(fn=cmd_model)

    sp = sub.add_parser("check", help="model-check a formula file against a model file")
    sp.add_argument("model")
    sp.add_argument("formula")
    sp.add_argument("--at", help="comma-separated points (default: all)")
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("e2e", help="family sweep comparing solver and model checker")
    sp.add_argument("--family", default="n<=2,s<=1", help="e.g. n<=2,s=0")
    sp.add_argument("--strict-abelard", action="store_true")
    sp.set_defaults(fn=cmd_e2e)

    gp = sub.add_parser("geometry", help="plane embedding checks")
    gsub = gp.add_subparsers(dest="geometry_command", required=True)

    sp = gsub.add_parser("verify", help="compare the disc relation with tree adjacency")
    sp.add_argument("--depth", type=int, default=6)
    sp.add_argument("--mode", choices=[geometry.OPEN, geometry.CLOSED],
                    default=geometry.OPEN)
    sp.set_defaults(fn=cmd_geometry_verify)

    sp = gsub.add_parser("lemma", help="randomised disc-through-circle harness")
    sp.add_argument("--trials", type=int, default=10000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(fn=cmd_geometry_lemma)

    sp = sub.add_parser("play", help="play an instance interactively")
    sp.add_argument("instance")
    sp.set_defaults(fn=cmd_play)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
