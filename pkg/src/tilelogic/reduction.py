"""Compile a game instance into a single tense-logic formula.

The formula is a conjunction of twenty numbered conditions. It is built
so that, on a suitable frame carrying an encoded copy of the game tree,
it is satisfiable at the root exactly when the first player has a
winning strategy. Moves are stretched over b tree levels; a saturating
L-bit counter tracks the number of moves played and cuts plays off at
the repetition bound N.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .game import WHITE, GameInstance, TileType, compatible
from .logic import (
    And, AlwaysFuture, AlwaysPast, Formula, Future, Iff, Implies, Not, Or,
    Past, TRUE, Var, conj, disj,
)

__all__ = [
    "ReductionParams", "PropSpace", "IndexDepth",
    "branching_factor", "bump", "beta", "beta_any",
    "diamond", "box", "universally", "condition", "counter_equals",
    "compile_instance", "CONDITION_IDS",
]

CONDITION_IDS = tuple(range(1, 21))


def branching_factor(s: int) -> int:
    """Levels per move: ceil(log2(s+2)), but never less than 3."""
    if s < 0:
        raise ValueError("s must be non-negative")
    return max(3, (s + 1).bit_length())


class IndexDepth(NamedTuple):
    """A column index in [1, n] paired with a level depth in [0, b-1]."""

    i: int
    j: int


def bump(id_: IndexDepth, n: int, b: int) -> IndexDepth:
    """Successor index/depth: step the depth, else advance the column
    cyclically and reset the depth."""
    i, j = id_
    if not (1 <= i <= n and 0 <= j <= b - 1):
        raise ValueError(f"({i}, {j}) out of range for n={n}, b={b}")
    if j <= b - 2:
        return IndexDepth(i, j + 1)
    if i < n:
        return IndexDepth(i + 1, 0)
    return IndexDepth(1, 0)


@dataclass(frozen=True)
class ReductionParams:
    """Derived sizes: corridor width n, spare tile count s, levels per
    move b, play bound N = 2n(s+2)^n, and counter width L = bits of N."""

    n: int
    s: int
    b: int
    N: int
    L: int

    @classmethod
    def for_instance(cls, inst: GameInstance) -> "ReductionParams":
        n, s = inst.n, inst.s
        N = 2 * n * (s + 2) ** n
        return cls(n=n, s=s, b=branching_factor(s), N=N, L=N.bit_length())


class PropSpace:
    """Proposition names used by a compiled formula.

    One token per argument combination; `q(1)` is the least significant
    counter bit.
    """

    def __init__(self, inst: GameInstance, params: ReductionParams):
        self.inst = inst
        self.params = params

    f = "f"
    eloise = "eloise"
    win = "win"

    def index(self, i: int) -> str:
        if not 1 <= i <= self.params.n:
            raise ValueError(f"index {i} out of range")
        return f"index{i}"

    def depth(self, j: int) -> str:
        if not 0 <= j <= self.params.b - 1:
            raise ValueError(f"depth {j} out of range")
        return f"depth{j}"

    def col(self, i: int, tile: str) -> str:
        if not 0 <= i <= self.params.n + 1:
            raise ValueError(f"column {i} out of range")
        self.inst.tile(tile)
        return f"col{i}_{tile}"

    def q(self, k: int) -> str:
        if not 1 <= k <= self.params.L:
            raise ValueError(f"counter bit {k} out of range")
        return f"q{k}"

    def all_names(self) -> frozenset[str]:
        names = {self.f, self.eloise, self.win}
        names.update(self.index(i) for i in range(1, self.params.n + 1))
        names.update(self.depth(j) for j in range(self.params.b))
        for i in range(self.params.n + 2):
            names.update(self.col(i, t.id) for t in self.inst.tiles)
        names.update(self.q(k) for k in range(1, self.params.L + 1))
        return frozenset(names)


def beta(space: PropSpace, id_: IndexDepth) -> Formula:
    """index_i and depth_j: "is a node, about to play column i, level j"."""
    return And(Var(space.index(id_.i)), Var(space.depth(id_.j)))


def beta_any(space: PropSpace) -> Formula:
    """Some index holds: "is a node"."""
    return disj(Var(space.index(i)) for i in range(1, space.params.n + 1))


def _index_depths(params: ReductionParams):
    for i in range(1, params.n + 1):
        for j in range(params.b):
            yield IndexDepth(i, j)


def diamond(space: PropSpace, params: ReductionParams, phi: Formula) -> Formula:
    """Possibly-for-a-child: some future point looks back on a child
    (next index/depth) satisfying phi, with nothing forbidden in its past."""
    parts = []
    for id_ in _index_depths(params):
        nxt = bump(id_, params.n, params.b)
        parts.append(And(
            beta(space, id_),
            Future(And(Past(And(beta(space, nxt), phi)), AlwaysPast(Not(Var(space.f))))),
        ))
    return disj(parts)


def box(space: PropSpace, params: ReductionParams, phi: Formula) -> Formula:
    """Necessarily-for-children: dual shape of `diamond`."""
    parts = []
    for id_ in _index_depths(params):
        nxt = bump(id_, params.n, params.b)
        parts.append(Implies(
            beta(space, id_),
            AlwaysFuture(Implies(
                AlwaysPast(Not(Var(space.f))),
                AlwaysPast(Implies(beta(space, nxt), phi)),
            )),
        ))
    return conj(parts)


def universally(phi: Formula) -> Formula:
    """G H phi: on transitive confluent frames, "everywhere"."""
    return AlwaysFuture(AlwaysPast(phi))


def counter_equals(space: PropSpace, params: ReductionParams, value: int) -> Formula:
    """Bit-by-bit equality of the counter with `value`, least bit first."""
    if not 0 <= value <= 2 ** params.L - 1:
        raise ValueError(f"value {value} needs more than {params.L} bits")
    parts = []
    for k in range(1, params.L + 1):
        qk = Var(space.q(k))
        parts.append(qk if (value >> (k - 1)) & 1 else Not(qk))
    return conj(parts)


def _frozen_pair(space, params, var: Formula) -> Formula:
    """(x -> box x) and (not x -> box not x)."""
    return And(
        Implies(var, box(space, params, var)),
        Implies(Not(var), box(space, params, Not(var))),
    )


def _compatible_tiles(inst: GameInstance, t_left: TileType, t_below: TileType) -> list[TileType]:
    return [t for t in inst.tiles if compatible(t_left, t, t_below)]


def condition(k: int, inst: GameInstance, space: PropSpace, params: ReductionParams,
              strict_abelard: bool = False) -> Formula:
    """One of the twenty numbered conjuncts of the compiled formula."""
    n, b, s, L = params.n, params.b, params.s, params.L
    v = Var
    U = universally
    eloise = v(space.eloise)
    node = beta_any(space)
    last_depth = v(space.depth(b - 1))

    if k == 1:
        # Start of play: first player to move, column 1 level 0, the
        # walls and the pre-filled first row in place.
        parts = [eloise, v(space.index(1)), v(space.depth(0)), v(space.col(0, inst.wall.id))]
        parts += [v(space.col(i, inst.initial_row[i - 1])) for i in range(1, n + 1)]
        parts.append(v(space.col(n + 1, inst.wall.id)))
        return conj(parts)

    if k == 2:
        return U(conj(
            Implies(v(space.index(i)), Not(v(space.index(j))))
            for i in range(1, n + 1) for j in range(1, n + 1) if i != j
        ))

    if k == 3:
        return U(conj(
            Implies(v(space.depth(i)), Not(v(space.depth(j))))
            for i in range(b) for j in range(b) if i != j
        ))

    if k == 4:
        return U(Iff(node, disj(v(space.depth(j)) for j in range(b))))

    if k == 5:
        return U(Implies(node, conj(
            disj(v(space.col(i, t.id)) for t in inst.tiles)
            for i in range(n + 2)
        )))

    if k == 6:
        return conj(
            U(Implies(v(space.col(i, tu.id)), Not(v(space.col(i, tv.id)))))
            for i in range(n + 2)
            for tu in inst.tiles for tv in inst.tiles if tu.id != tv.id
        )

    if k == 7:
        return U(Implies(node, And(v(space.col(0, inst.wall.id)), v(space.col(n + 1, inst.wall.id)))))

    if k == 8:
        # Within a move's levels nothing about the game position changes.
        premise = And(node, Not(last_depth))
        parts = [U(Implies(premise, _frozen_pair(space, params, eloise)))]
        parts += [
            U(Implies(premise, _frozen_pair(space, params, v(space.col(i, t.id)))))
            for i in range(1, n + 1) for t in inst.tiles
        ]
        return conj(parts)

    if k == 9:
        return conj(
            U(Implies(beta(space, IndexDepth(i, b - 1)),
                      _frozen_pair(space, params, v(space.col(j, t.id)))))
            for i in range(1, n + 1) for j in range(1, n + 1) if j != i
            for t in inst.tiles
        )

    if k == 10:
        return U(Implies(last_depth, And(
            Implies(eloise, box(space, params, Not(eloise))),
            Implies(Not(eloise), box(space, params, eloise)),
        )))

    if k == 11:
        # A placed tile must match its left and lower neighbours.
        parts = []
        for i in range(1, n + 1):
            for tl in inst.tiles:
                for tb in inst.tiles:
                    fits = _compatible_tiles(inst, tl, tb)
                    parts.append(U(Implies(
                        conj([beta(space, IndexDepth(i, b - 1)),
                              v(space.col(i - 1, tl.id)), v(space.col(i, tb.id))]),
                        box(space, params, disj(v(space.col(i, t.id)) for t in fits)),
                    )))
        return conj(parts)

    if k == 12:
        return U(Implies(node, disj(
            v(space.col(n, t.id)) for t in inst.tiles if t.right == WHITE
        )))

    if k == 13:
        # Every tile the second player could legally place appears among
        # the children of their nodes.
        top = n + 1 if strict_abelard else n
        parts = []
        for i in range(1, top):
            for tl in inst.tiles:
                for tb in inst.tiles:
                    fits = _compatible_tiles(inst, tl, tb)
                    if i == n:
                        fits = [t for t in fits if t.right == WHITE]
                    parts.append(U(Implies(
                        conj([Not(eloise), v(space.index(i)), last_depth,
                              v(space.col(i, tb.id)), v(space.col(i - 1, tl.id))]),
                        conj(diamond(space, params, v(space.col(i, t.id))) for t in fits),
                    )))
        return conj(parts)

    if k == 14:
        return v(space.win)

    if k == 15:
        # A winning node either shows the target in column 1 already, or
        # passes the win obligation through the move tree.
        win = v(space.win)
        return U(Implies(win, Or(
            Or(
                v(space.col(1, inst.target.id)),
                conj([Not(eloise), diamond(space, params, TRUE), box(space, params, win)]),
            ),
            conj([eloise, diamond(space, params, win)]),
        )))

    if k == 16:
        return conj(Not(v(space.q(kk))) for kk in range(L, 0, -1))

    if k == 17:
        return U(Implies(And(node, Not(last_depth)), conj(
            _frozen_pair(space, params, v(space.q(kk))) for kk in range(1, L + 1)
        )))

    if k == 18:
        return U(Implies(And(last_depth, Not(v(space.q(1)))), And(
            box(space, params, v(space.q(1))),
            conj(_frozen_pair(space, params, v(space.q(kk))) for kk in range(2, L + 1)),
        )))

    if k == 19:
        parts = []
        for kk in range(1, L):
            premise = conj([last_depth, Not(v(space.q(kk + 1)))] +
                           [v(space.q(l)) for l in range(1, kk + 1)])
            flipped = conj([v(space.q(kk + 1))] + [Not(v(space.q(l))) for l in range(1, kk + 1)])
            parts.append(U(Implies(premise, And(
                box(space, params, flipped),
                conj(_frozen_pair(space, params, v(space.q(l))) for l in range(kk + 2, L + 1)),
            ))))
        return conj(parts)

    if k == 20:
        return U(Implies(And(node, counter_equals(space, params, params.N)), Not(v(space.win))))

    raise ValueError(f"no condition numbered {k}")


def compile_instance(inst: GameInstance, strict_abelard: bool = False) -> Formula:
    """The full formula: conditions 1 through 20 conjoined in order."""
    params = ReductionParams.for_instance(inst)
    space = PropSpace(inst, params)
    return conj(
        condition(k, inst, space, params, strict_abelard=strict_abelard)
        for k in CONDITION_IDS
    )
