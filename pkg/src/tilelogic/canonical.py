"""Canonical models for compiled formulas, and strategy extraction.

The reachable game states are unrolled into a finite graph keyed by
(state, level, counter) — the label-quotient of the stretched game tree,
small enough to model-check directly. Each graph edge gets a dedicated
witness point sitting above its two endpoints; a reflexive top point
restores confluence and a single forbidden point below it blocks the
top from acting as a clean witness. The valuation labels graph nodes
with their game content and marks `win` wherever the first player can
still force the win within the remaining counter budget.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Mapping

from .game import (
    ABELARD, ELOISE, INFINITE_RANK, GameInstance, Position, SolveResult,
    State, TerminalWin, initial_position, legal_moves, apply,
)
from .logic import KripkeFrame, KripkeModel
from .reduction import PropSpace, ReductionParams, bump, IndexDepth

__all__ = [
    "EncodedNode", "EncodedGraph", "WitnessFrame", "ExtractionError",
    "encode_graph", "witness_frame", "canonical_valuation",
    "check_embedding_condition", "extract_strategy",
]


@dataclass(frozen=True)
class EncodedNode:
    """A game state at one of the b levels encoding a move, plus the
    number of moves played so far (saturating at the counter maximum)."""

    state: State
    depth: int
    counter: int


@dataclass(eq=False)
class EncodedGraph:
    """Label-quotient of the encoded game tree."""

    root: EncodedNode
    nodes: list[EncodedNode]
    edges: list[tuple[EncodedNode, EncodedNode]]
    params: ReductionParams

    def successors(self) -> dict[EncodedNode, list[EncodedNode]]:
        succ: dict[EncodedNode, list[EncodedNode]] = {v: [] for v in self.nodes}
        for a, b in self.edges:
            succ[a].append(b)
        return succ


def encode_graph(inst: GameInstance, result: SolveResult) -> EncodedGraph:
    """Unroll play from the start: within a move the level steps and
    nothing else changes; at the last level each legal move produces a
    fresh node with the counter bumped (saturating). The winning
    placement is a sink."""
    params = ReductionParams.for_instance(inst)
    b, cap = params.b, 2 ** params.L - 1
    root = EncodedNode(initial_position(inst), 0, 0)
    nodes: list[EncodedNode] = [root]
    seen = {root}
    edges: list[tuple[EncodedNode, EncodedNode]] = []
    queue = [root]
    while queue:
        node = queue.pop(0)
        if isinstance(node.state, TerminalWin):
            continue
        if node.depth < b - 1:
            children = [EncodedNode(node.state, node.depth + 1, node.counter)]
        else:
            nxt_counter = min(cap, node.counter + 1)
            children = [
                EncodedNode(apply(inst, node.state, tid), 0, nxt_counter)
                for tid in legal_moves(inst, node.state)
            ]
        for child in children:
            edges.append((node, child))
            if child not in seen:
                seen.add(child)
                nodes.append(child)
                queue.append(child)
    return EncodedGraph(root, nodes, edges, params)


@dataclass(eq=False)
class WitnessFrame:
    """Frame realisation of an encoded graph: one witness point above
    each edge's endpoints, one reflexive top above everything, and one
    forbidden point below the top only."""

    frame: KripkeFrame
    node_map: dict[EncodedNode, str]
    witness_map: dict[tuple[EncodedNode, EncodedNode], str]
    top: str
    fpoint: str


def witness_frame(g: EncodedGraph) -> WitnessFrame:
    node_map = {node: f"n{i}" for i, node in enumerate(g.nodes)}
    witness_map = {edge: f"w{i}" for i, edge in enumerate(g.edges)}
    top, fpoint = "top", "fpoint"
    points = list(node_map.values()) + list(witness_map.values()) + [top, fpoint]
    rel = []
    for (a, b), w in witness_map.items():
        rel.append((node_map[a], w))
        rel.append((node_map[b], w))
    for p in points:
        if p != top:
            rel.append((p, top))
    rel.append((top, top))
    return WitnessFrame(KripkeFrame(points, rel), node_map, witness_map, top, fpoint)


def _state_content(state: State) -> Position:
    return state.final if isinstance(state, TerminalWin) else state


def canonical_valuation(inst: GameInstance, g: EncodedGraph, result: SolveResult,
                        frame: WitnessFrame | None = None) -> KripkeModel:
    """Label graph nodes with their game content; witness points, the
    top, and the forbidden point carry nothing except `f` at the latter.

    `win` marks nodes where the forced-win rank still fits in the moves
    that remain before the counter reaches the play bound.
    """
    wf = frame if frame is not None else witness_frame(g)
    params = g.params
    space = PropSpace(inst, params)
    val: dict[str, set[str]] = {space.f: {wf.fpoint}}

    def add(prop: str, point: str):
        val.setdefault(prop, set()).add(point)

    for node, point in wf.node_map.items():
        content = _state_content(node.state)
        add(space.index(content.next_column), point)
        add(space.depth(node.depth), point)
        if content.player == ELOISE:
            add(space.eloise, point)
        add(space.col(0, inst.wall.id), point)
        add(space.col(params.n + 1, inst.wall.id), point)
        for i in range(1, params.n + 1):
            add(space.col(i, content.last_row[i - 1]), point)
        for k in range(1, params.L + 1):
            if (node.counter >> (k - 1)) & 1:
                add(space.q(k), point)
        rank = result.rank[node.state]
        if node.counter < params.N and rank <= params.N - 1 - node.counter:
            add(space.win, point)
    return KripkeModel(wf.frame, val)


def check_embedding_condition(frame: KripkeFrame, adjacency: Iterable[tuple],
                              node_map: Mapping, forbidden: Iterable) -> bool:
    """Does condition (2) hold: two mapped nodes share a clean upper
    bound (a point whose past avoids the forbidden set) exactly when
    they are adjacent?"""
    fset = set(forbidden)
    pred = frame.predecessors()
    mapped = set(node_map.values())
    expected = set()
    for a, b in adjacency:
        pa, pb = node_map[a], node_map[b]
        if pa != pb:
            expected.add(frozenset((pa, pb)))
    related = set()
    for z in frame.points:
        below = pred[z]
        if below & fset:
            continue
        hits = sorted(below & mapped, key=str)
        for i in range(len(hits)):
            for j in range(i + 1, len(hits)):
                related.add(frozenset((hits[i], hits[j])))
    return related == expected


class ExtractionError(RuntimeError):
    pass


def _decode_counter(labels: set[str], space: PropSpace) -> int:
    c = 0
    for k in range(1, space.params.L + 1):
        if space.q(k) in labels:
            c |= 1 << (k - 1)
    return c


def extract_strategy(model: KripkeModel, root, params: ReductionParams,
                     space: PropSpace) -> dict[Position, str]:
    """Read a strategy out of a model satisfying the compiled formula.

    Walks the semantic child relation (shared clean upper bound, next
    index/depth) from the root, following a win-labelled child at
    first-player nodes and all children at second-player nodes; a
    target-in-column-1 label ends a branch. Nodes are processed in
    counter order and revisited positions overwrite their choice, so
    the final positional map is safe against transpositions.
    """
    points_of: dict[str, set[str]] = {}
    for prop, pts in model.valuation.items():
        for p in pts:
            points_of.setdefault(p, set()).add(prop)
    succ = model.frame.successors()
    pred = model.frame.predecessors()
    fset = model.valuation.get(space.f, frozenset())
    clean = {z for z in model.frame.points if not (pred[z] & fset)}
    n, b = params.n, params.b

    def labels(p) -> set[str]:
        return points_of.get(p, set())

    def decode_id(p) -> IndexDepth | None:
        lab = labels(p)
        idx = [i for i in range(1, n + 1) if space.index(i) in lab]
        dep = [j for j in range(b) if space.depth(j) in lab]
        if len(idx) == 1 and len(dep) == 1:
            return IndexDepth(idx[0], dep[0])
        return None

    def decode_position(p) -> Position:
        lab = labels(p)
        row = []
        for i in range(1, n + 1):
            owners = [t.id for t in space.inst.tiles if space.col(i, t.id) in lab]
            if len(owners) != 1:
                raise ExtractionError(f"ambiguous column {i} at point {p!r}")
            row.append(owners[0])
        player = ELOISE if space.eloise in lab else ABELARD
        id_ = decode_id(p)
        if id_ is None:
            raise ExtractionError(f"point {p!r} carries no index/depth")
        return Position(player, tuple(row), id_.i)

    def children(p) -> list:
        id_ = decode_id(p)
        if id_ is None:
            raise ExtractionError(f"point {p!r} carries no index/depth")
        nxt = bump(id_, n, b)
        want_i, want_j = space.index(nxt.i), space.depth(nxt.j)
        out = set()
        for z in succ[p]:
            if z not in clean:
                continue
            for y in pred[z]:
                lab = labels(y)
                if want_i in lab and want_j in lab:
                    out.add(y)
        return sorted(out, key=str)

    target_col1 = space.col(1, space.inst.target.id)
    strat: dict[Position, str] = {}
    heap = [(_decode_counter(labels(root), space), str(root), root)]
    seen = {root}
    while heap:
        _, _, p = heapq.heappop(heap)
        lab = labels(p)
        if target_col1 in lab:
            continue
        id_ = decode_id(p)
        kids = children(p)
        if space.eloise in lab:
            winners = [y for y in kids if space.win in labels(y)]
            if not winners:
                raise ExtractionError(f"win node {p!r} has no winning child")
            choice = winners[0]
            if id_ is not None and id_.j == b - 1:
                pos = decode_position(p)
                placed = [t.id for t in space.inst.tiles
                          if space.col(id_.i, t.id) in labels(choice)]
                if len(placed) != 1:
                    raise ExtractionError(f"ambiguous placed tile below {p!r}")
                strat[pos] = placed[0]
            follow = [choice]
        else:
            follow = kids
        for y in follow:
            if y not in seen:
                seen.add(y)
                heapq.heappush(heap, (_decode_counter(labels(y), space), str(y), y))
    return strat
