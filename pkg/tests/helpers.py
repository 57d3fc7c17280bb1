"""Independent oracles and generators shared across the test suite.

Everything here deliberately avoids the package's evaluation paths:
the formula oracle is plain per-point recursion over dict adjacency,
and the game oracle is memoisation-free minimax with a repetition
cutoff.
"""

from __future__ import annotations

import random

from tilelogic.game import (
    ELOISE, INFINITE_RANK, GameInstance, Position, TerminalWin, TileType,
    WHITE, apply, initial_position, legal_moves,
)
from tilelogic.logic import (
    And, AlwaysFuture, AlwaysPast, Const, Formula, Future, Iff, Implies,
    KripkeFrame, KripkeModel, Not, Or, Past, Var,
)


# --- reference evaluator --------------------------------------------------


def eval_at(model: KripkeModel, phi: Formula, point) -> bool:
    """Textbook recursive semantics, one point at a time."""
    succ = model.frame.successors()
    pred = model.frame.predecessors()

    def go(f: Formula, x) -> bool:
        if isinstance(f, Var):
            return x in model.valuation.get(f.name, frozenset())
        if isinstance(f, Const):
            return f.value
        if isinstance(f, Not):
            return not go(f.child, x)
        if isinstance(f, And):
            return go(f.left, x) and go(f.right, x)
        if isinstance(f, Or):
            return go(f.left, x) or go(f.right, x)
        if isinstance(f, Implies):
            return (not go(f.left, x)) or go(f.right, x)
        if isinstance(f, Iff):
            return go(f.left, x) == go(f.right, x)
        if isinstance(f, Future):
            return any(go(f.child, y) for y in succ[x])
        if isinstance(f, Past):
            return any(go(f.child, y) for y in pred[x])
        if isinstance(f, AlwaysFuture):
            return all(go(f.child, y) for y in succ[x])
        if isinstance(f, AlwaysPast):
            return all(go(f.child, y) for y in pred[x])
        raise TypeError(f)

    return go(phi, point)


def eval_everywhere(model: KripkeModel, phi: Formula) -> frozenset:
    return frozenset(x for x in model.frame.points if eval_at(model, phi, x))


# --- random corpora -------------------------------------------------------


def random_model(rng: random.Random, max_points: int = 6,
                 props=("p", "q", "r")) -> KripkeModel:
    n = rng.randint(1, max_points)
    points = [f"x{i}" for i in range(n)]
    rel = [(a, b) for a in points for b in points if rng.random() < 0.35]
    val = {prop: {x for x in points if rng.random() < 0.5} for prop in props}
    return KripkeModel(KripkeFrame(points, rel), val)


def random_formula(rng: random.Random, props=("p", "q", "r"), depth: int = 4) -> Formula:
    if depth == 0 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.8:
            return Var(rng.choice(props))
        return Const(rng.random() < 0.5)
    unary = [Not, Future, Past, AlwaysFuture, AlwaysPast]
    binary = [And, Or, Implies, Iff]
    if rng.random() < 0.55:
        op = rng.choice(unary)
        return op(random_formula(rng, props, depth - 1))
    op = rng.choice(binary)
    return op(random_formula(rng, props, depth - 1),
              random_formula(rng, props, depth - 1))


# --- exhaustive game oracle -----------------------------------------------


def oracle_rank(inst: GameInstance, pos: Position | None = None,
                path: frozenset = frozenset()) -> float:
    """Minimax over the full game tree, cutting any branch that repeats
    a position (a repeat can never help the first player)."""
    if pos is None:
        pos = initial_position(inst)
    if pos in path:
        return INFINITE_RANK
    path = path | {pos}
    options = legal_moves(inst, pos)
    if not options:
        return INFINITE_RANK
    values = []
    for tid in options:
        nxt = apply(inst, pos, tid)
        values.append(0 if isinstance(nxt, TerminalWin)
                      else oracle_rank(inst, nxt, path))
    best = min(values) if pos.player == ELOISE else max(values)
    return 1 + best


def oracle_winner(inst: GameInstance) -> str:
    return ELOISE if oracle_rank(inst) < INFINITE_RANK else "abelard"


# --- tiny fixed instances -------------------------------------------------


def all_white_tile(tid: str) -> TileType:
    return TileType(tid, WHITE, WHITE, WHITE, WHITE)


def instance_a() -> GameInstance:
    """Width 1, all-white wall and target; first player wins in one."""
    return GameInstance((all_white_tile("T0"), all_white_tile("T1")), ("T0",))


def instance_b() -> GameInstance:
    """Width 1 with an unplaceable target (black left edge)."""
    return GameInstance(
        (all_white_tile("T0"), TileType("T1", "black", WHITE, WHITE, WHITE)),
        ("T0",),
    )
