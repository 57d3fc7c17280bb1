"""Corridor tiling game: instances, rules, and an exact solver.

Two players alternately place tiles left-to-right in an n-wide corridor
between white walls; the first player wins by placing the last-listed
tile type in column 1, and wins nothing otherwise (stuck or endless play
goes to the second player). Solving is backward induction over the
finite position graph, producing a rank: the least number of moves
within which the first player can force the win.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

__all__ = [
    "WHITE", "ELOISE", "ABELARD", "INFINITE_RANK",
    "TileType", "GameInstance", "Position", "TerminalWin", "State",
    "SolveResult", "IllegalMoveError",
    "compatible", "initial_position", "legal_moves", "apply",
    "enumerate_positions", "reachable_states", "solve",
    "optimal_strategy", "validate_strategy", "validate_instance",
    "parse_instance", "format_instance",
]

WHITE = "white"
ELOISE = "eloise"
ABELARD = "abelard"
INFINITE_RANK = math.inf


class IllegalMoveError(ValueError):
    pass


@dataclass(frozen=True)
class TileType:
    """A square tile with a colour on each side; fixed orientation."""

    id: str
    left: str
    right: str
    up: str
    down: str


@dataclass(frozen=True)
class GameInstance:
    """An ordered tile list (wall tile first, target tile last) plus the
    pre-filled first row. Width n and tile count are derived."""

    tiles: tuple[TileType, ...]
    initial_row: tuple[str, ...]

    def __post_init__(self):
        if len(self.tiles) < 2:
            raise ValueError("need at least the wall tile and the target tile")
        ids = [t.id for t in self.tiles]
        if len(set(ids)) != len(ids):
            raise ValueError("tile ids must be unique")
        if len(self.initial_row) < 1:
            raise ValueError("initial row must have at least one tile")
        known = set(ids)
        for tid in self.initial_row:
            if tid not in known:
                raise ValueError(f"initial row mentions unknown tile {tid!r}")

    @property
    def n(self) -> int:
        return len(self.initial_row)

    @property
    def s(self) -> int:
        return len(self.tiles) - 2

    @property
    def wall(self) -> TileType:
        return self.tiles[0]

    @property
    def target(self) -> TileType:
        return self.tiles[-1]

    def tile(self, tid: str) -> TileType:
        for t in self.tiles:
            if t.id == tid:
                return t
        raise KeyError(tid)


@dataclass(frozen=True)
class Position:
    """Everything needed to continue play: whose turn, the last tile per
    column, and the column where the next tile goes (1-based)."""

    player: str
    last_row: tuple[str, ...]
    next_column: int


@dataclass(frozen=True)
class TerminalWin:
    """Play halted by the winning placement; `final` is the board state
    just after it (row updated, turn already toggled)."""

    final: Position


State = Position | TerminalWin


def initial_position(inst: GameInstance) -> Position:
    return Position(ELOISE, inst.initial_row, 1)


def compatible(t_left: TileType, t: TileType, t_below: TileType) -> bool:
    """May `t` sit to the right of `t_left` and above `t_below`?"""
    return t_left.right == t.left and t.down == t_below.up


def legal_moves(inst: GameInstance, pos: Position) -> tuple[str, ...]:
    """Playable tile ids at `pos`, in tile-list order (may be empty).

    The wall tile bounds column 1 on the left and column n on the right,
    so column-n placements must also show white on their right side.
    """
    col = pos.next_column
    left_tile = inst.wall if col == 1 else inst.tile(pos.last_row[col - 2])
    below_tile = inst.tile(pos.last_row[col - 1])
    out = []
    for t in inst.tiles:
        if not compatible(left_tile, t, below_tile):
            continue
        if col == inst.n and t.right != WHITE:
            continue
        out.append(t.id)
    return tuple(out)


def apply(inst: GameInstance, pos: Position, tile: str) -> State:
    """Place `tile`; the winning placement ends play immediately."""
    if tile not in legal_moves(inst, pos):
        raise IllegalMoveError(f"{tile!r} is not a legal move at {pos}")
    col = pos.next_column
    row = list(pos.last_row)
    row[col - 1] = tile
    nxt = Position(
        ABELARD if pos.player == ELOISE else ELOISE,
        tuple(row),
        1 if col == inst.n else col + 1,
    )
    if tile == inst.target.id and col == 1:
        return TerminalWin(nxt)
    return nxt


def reachable_states(inst: GameInstance) -> tuple[list[State], dict[Position, list[tuple[str, State]]]]:
    """BFS closure of the initial position under legal play.

    Returns the states in discovery order and the move map
    position -> [(tile, successor)].
    """
    start = initial_position(inst)
    order: list[State] = [start]
    seen: set[State] = {start}
    moves: dict[Position, list[tuple[str, State]]] = {}
    queue = [start]
    while queue:
        pos = queue.pop(0)
        succ = []
        for tid in legal_moves(inst, pos):
            nxt = apply(inst, pos, tid)
            succ.append((tid, nxt))
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                if isinstance(nxt, Position):
                    queue.append(nxt)
        moves[pos] = succ
    return order, moves


def enumerate_positions(inst: GameInstance) -> set[Position]:
    """Positions reachable from the start (terminal markers excluded)."""
    order, _ = reachable_states(inst)
    return {s for s in order if isinstance(s, Position)}


@dataclass(frozen=True)
class SolveResult:
    """Winner plus the forced-win rank of every reachable state
    (INFINITE_RANK where the first player cannot force the win)."""

    winner: str
    rank: Mapping[State, float]


def solve(inst: GameInstance) -> SolveResult:
    """Backward-induction least fixpoint over the reachable state graph.

    rank 0 at the winning placement; 1 + min over moves at first-player
    positions; 1 + max at second-player positions (infinite when stuck or
    when any reply escapes); cycles never acquire finite rank.
    """
    order, moves = reachable_states(inst)
    rank: dict[State, float] = {
        s: 0 if isinstance(s, TerminalWin) else INFINITE_RANK for s in order
    }
    changed = True
    while changed:
        changed = False
        for s in order:
            if isinstance(s, TerminalWin):
                continue
            succ = moves[s]
            if not succ:
                continue
            vals = [rank[q] for _, q in succ]
            new = 1 + (min(vals) if s.player == ELOISE else max(vals))
            if new < rank[s]:
                rank[s] = new
                changed = True
    start = initial_position(inst)
    winner = ELOISE if rank[start] < INFINITE_RANK else ABELARD
    return SolveResult(winner, rank)


def optimal_strategy(inst: GameInstance, result: SolveResult) -> dict[Position, str]:
    """Rank-greedy choice at every ranked first-player position."""
    _, moves = reachable_states(inst)
    strat: dict[Position, str] = {}
    for pos, succ in moves.items():
        if pos.player != ELOISE or result.rank[pos] == INFINITE_RANK:
            continue
        best = min(succ, key=lambda item: (result.rank[item[1]],))
        strat[pos] = best[0]
    return strat


def validate_strategy(inst: GameInstance, strat: Mapping[Position, str]) -> bool:
    """Play the strategy against every reply; any stuck branch, repeated
    position, undefined choice, or over-length play refutes it."""
    bound = 2 * inst.n * (inst.s + 2) ** inst.n

    def play(pos: Position, seen: frozenset[Position], depth: int) -> bool:
        if depth > bound:
            return False
        if pos in seen:
            return False
        seen = seen | {pos}
        options = legal_moves(inst, pos)
        if pos.player == ELOISE:
            choice = strat.get(pos)
            if choice is None or choice not in options:
                return False
            nxt = apply(inst, pos, choice)
            return isinstance(nxt, TerminalWin) or play(nxt, seen, depth + 1)
        if not options:
            return False
        for tid in options:
            nxt = apply(inst, pos, tid)
            if isinstance(nxt, TerminalWin):
                continue
            if not play(nxt, seen, depth + 1):
                return False
        return True

    return play(initial_position(inst), frozenset(), 0)


def validate_instance(inst: GameInstance) -> list[str]:
    """Non-fatal conformance report: wall colouring, right edge of the
    initial row, and internal colour mismatches in the initial row."""
    issues = []
    w = inst.wall
    for side in ("left", "right", "up", "down"):
        if getattr(w, side) != WHITE:
            issues.append(f"wall tile {w.id} has non-white {side} side {getattr(w, side)!r}")
    last = inst.tile(inst.initial_row[-1])
    if last.right != WHITE:
        issues.append(f"initial row ends with {last.id} whose right side is {last.right!r}")
    for k in range(1, inst.n):
        a = inst.tile(inst.initial_row[k - 1])
        b = inst.tile(inst.initial_row[k])
        if a.right != b.left:
            issues.append(
                f"initial row mismatch between columns {k} and {k + 1}: "
                f"{a.id}.right={a.right!r} vs {b.id}.left={b.left!r}"
            )
    return issues


# --- instance text format ------------------------------------------------


def parse_instance(text: str) -> GameInstance:
    """Line format: `corridor <n>`, `tile <id> <l> <r> <u> <d>`,
    `initial <id_1> ... <id_n>`; '#' starts a comment."""
    width: int | None = None
    tiles: list[TileType] = []
    row: tuple[str, ...] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "corridor" and len(parts) == 2:
            width = int(parts[1])
        elif parts[0] == "tile" and len(parts) == 6:
            tiles.append(TileType(*parts[1:]))
        elif parts[0] == "initial" and len(parts) >= 2:
            row = tuple(parts[1:])
        else:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}")
    if row is None:
        raise ValueError("missing `initial` line")
    if width is not None and width != len(row):
        raise ValueError(f"corridor width {width} does not match initial row of {len(row)}")
    return GameInstance(tuple(tiles), row)


def format_instance(inst: GameInstance) -> str:
    lines = [f"corridor {inst.n}"]
    for t in inst.tiles:
        lines.append(f"tile {t.id} {t.left} {t.right} {t.up} {t.down}")
    lines.append("initial " + " ".join(inst.initial_row))
    return "\n".join(lines) + "\n"
