"""End-to-end sweep: solve each game, compile its formula, build the
canonical model, and compare the model-checking verdict with the game
winner. Also runs the frame health checks and, on won games, the
strategy round trip."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .canonical import (
    canonical_valuation, check_embedding_condition, encode_graph,
    extract_strategy, witness_frame,
)
from .game import (
    ELOISE, WHITE, GameInstance, TileType, initial_position, solve,
    validate_strategy,
)
from .logic import (
    FALSE, Not, Or, Var, conj, holds, holds_at, is_confluent, is_transitive,
)
from .reduction import PropSpace, ReductionParams, compile_instance, universally

__all__ = ["InstanceReport", "generate_family", "run_instance", "run_family"]


@dataclass
class InstanceReport:
    label: str
    inst: GameInstance
    winner: str
    rank: float
    verdict: bool
    agree: bool
    points: int
    formula_size: int | None = None
    frame_transitive: bool | None = None
    frame_confluent: bool | None = None
    frame_embedding: bool | None = None
    frame_universal: bool | None = None
    strategy_valid: bool | None = None
    rank_within_bound: bool | None = None


def _two_colour_tiles() -> list[tuple[str, str, str, str]]:
    colours = (WHITE, "black")
    return list(product(colours, repeat=4))


def generate_family(n_values=(1, 2), s_values=(0, 1)) -> list[tuple[str, GameInstance]]:
    """Exhaustive two-colour instances for the given widths and tile
    counts. Initial rows range over all well-formed rows when s = 0 and
    stay all-wall for s = 1 to keep the family a few hundred strong.

    Well-formed here means: white wall tile, white right edge on the
    last initial tile, and no target tile in column 1 of the initial
    row (such instances are satisfiable regardless of play).
    """
    sides = _two_colour_tiles()
    family: list[tuple[str, GameInstance]] = []
    for n in n_values:
        for s in s_values:
            wall = TileType("T0", WHITE, WHITE, WHITE, WHITE)
            count = 0
            for combo in product(range(len(sides)), repeat=s + 1):
                tiles = (wall,) + tuple(
                    TileType(f"T{k + 1}", *sides[i]) for k, i in enumerate(combo)
                )
                inst_proto = GameInstance(tiles, tuple([wall.id] * n))
                target = inst_proto.target.id
                if s == 0:
                    candidates = [t.id for t in tiles]
                    rows = []
                    for row in product(candidates, repeat=n):
                        if row[0] == target:
                            continue
                        if inst_proto.tile(row[-1]).right != WHITE:
                            continue
                        rows.append(row)
                else:
                    rows = [tuple([wall.id] * n)]
                for row in rows:
                    inst = GameInstance(tiles, row)
                    family.append((f"n{n}s{s}-{count:04d}", inst))
                    count += 1
    return family


def _check_universal_prefix(model, space) -> bool:
    """G H phi must hold somewhere iff phi holds everywhere."""
    everything = frozenset(model.frame.points)
    tautology = Or(Var(space.f), Not(Var(space.f)))
    for phi in (tautology, Var(space.f), Var(space.win), FALSE):
        u = holds(model, universally(phi))
        if holds(model, phi) == everything:
            if u != everything:
                return False
        elif u:
            return False
    return True


def run_instance(label: str, inst: GameInstance, strict_abelard: bool = False,
                 check_frames: bool = True, round_trip: bool = True) -> InstanceReport:
    """Full pipeline on one instance."""
    result = solve(inst)
    params = ReductionParams.for_instance(inst)
    space = PropSpace(inst, params)
    phi = compile_instance(inst, strict_abelard=strict_abelard)
    graph = encode_graph(inst, result)
    wf = witness_frame(graph)
    model = canonical_valuation(inst, graph, result, frame=wf)
    root_point = wf.node_map[graph.root]
    verdict = holds_at(model, phi, root_point)
    winner_eloise = result.winner == ELOISE
    rank0 = result.rank[initial_position(inst)]
    report = InstanceReport(
        label=label,
        inst=inst,
        winner=result.winner,
        rank=rank0,
        verdict=verdict,
        agree=verdict == winner_eloise,
        points=len(model.frame.points),
    )
    from .logic import formula_size
    report.formula_size = formula_size(phi)
    if check_frames:
        report.frame_transitive = is_transitive(wf.frame)
        report.frame_confluent = is_confluent(wf.frame)
        adjacency = [(a, b) for a, b in graph.edges]
        report.frame_embedding = check_embedding_condition(
            wf.frame, adjacency, wf.node_map, {wf.fpoint})
        report.frame_universal = _check_universal_prefix(model, space)
    if round_trip and winner_eloise:
        strat = extract_strategy(model, root_point, params, space)
        report.strategy_valid = validate_strategy(inst, strat)
        report.rank_within_bound = rank0 <= params.N - 1
    return report


def run_family(family=None, strict_abelard: bool = False,
               check_frames: bool = True, round_trip: bool = True) -> list[InstanceReport]:
    if family is None:
        family = generate_family()
    return [
        run_instance(label, inst, strict_abelard=strict_abelard,
                     check_frames=check_frames, round_trip=round_trip)
        for label, inst in family
    ]
