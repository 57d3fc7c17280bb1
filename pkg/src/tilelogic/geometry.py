"""Exact plane geometry for the binary-tree embedding.

Tree nodes are bit strings embedded into the plane; the forbidden set is
two boundary lines plus a ray from every sibling midpoint. Two embedded
nodes are related when some disc contains both while avoiding every
forbidden point, and the headline computation checks that this relation
is exactly tree adjacency. Disc feasibility is decided exactly over the
one-parameter family of discs through the two points: each obstacle
contributes piecewise-quadratic constraints in the parameter, their
roots (quadratic surds) split the line into cells, and every cell is
sampled at an exact rational point. All verdicts are exact; floating
point only routes which obstacles receive the exact treatment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations
from typing import Iterable, Sequence, Union

import numpy as np

from .quadalg import QuadAlg, quad_roots, rational_between

__all__ = [
    "QPoint", "Disc", "Line", "Ray", "Obstacle", "ObstacleSet", "AffineMap",
    "Event", "NodeId",
    "OPEN", "CLOSED", "MINKOWSKI_KINDS",
    "embed_node", "sibling_midpoint", "obstacles", "similarity_for",
    "dist2", "dist2_to_obstacle", "disc_avoids", "disc_exists",
    "tilde_relation", "tree_adjacency", "circle_lemma_check",
    "minkowski_related", "cone_section",
]

OPEN = "open"
CLOSED = "closed"
NodeId = str


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class QPoint:
    """A point of the spacelike plane, with exact rational coordinates."""

    x: Fraction
    y: Fraction

    def __init__(self, x, y):
        object.__setattr__(self, "x", _frac(x))
        object.__setattr__(self, "y", _frac(y))


def dist2(p: QPoint, q: QPoint) -> Fraction:
    return (p.x - q.x) ** 2 + (p.y - q.y) ** 2


@dataclass(frozen=True)
class Disc:
    """Disc given by centre and squared radius; open or closed."""

    center: QPoint
    radius_sq: Fraction
    mode: str = CLOSED

    def __init__(self, center: QPoint, radius_sq, mode: str = CLOSED):
        radius_sq = _frac(radius_sq)
        if radius_sq <= 0:
            raise ValueError("radius_sq must be positive")
        if mode not in (OPEN, CLOSED):
            raise ValueError(f"unknown disc mode {mode!r}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius_sq", radius_sq)
        object.__setattr__(self, "mode", mode)

    def contains(self, p: QPoint) -> bool:
        d2 = dist2(self.center, p)
        return d2 < self.radius_sq if self.mode == OPEN else d2 <= self.radius_sq


@dataclass(frozen=True)
class Line:
    """The line y = x + c."""

    c: Fraction

    def __init__(self, c):
        object.__setattr__(self, "c", _frac(c))


@dataclass(frozen=True)
class Ray:
    """Points origin + t*(1, 1) for t >= 0."""

    origin: QPoint


Obstacle = Union[Line, Ray]


def embed_node(node: NodeId) -> QPoint:
    """Bit strings into the plane: bit k moves 2^-k along the axis the
    bit selects; the empty string sits at the origin."""
    x = Fraction(0)
    y = Fraction(0)
    for i, bit in enumerate(node):
        step = Fraction(1, 2 ** i)
        if bit == "0":
            x += step
        elif bit == "1":
            y += step
        else:
            raise ValueError(f"node ids are bit strings, got {node!r}")
    return QPoint(x, y)


def sibling_midpoint(node: NodeId) -> QPoint:
    """Midpoint of the two children of `node`."""
    p0 = embed_node(node + "0")
    p1 = embed_node(node + "1")
    return QPoint((p0.x + p1.x) / 2, (p0.y + p1.y) / 2)


def obstacles(max_depth: int) -> list[Obstacle]:
    """The two boundary lines plus one ray per sibling midpoint of every
    node of length <= max_depth."""
    if max_depth < 0:
        raise ValueError("max_depth must be non-negative")
    out: list[Obstacle] = [Line(-2), Line(2)]
    level = [""]
    for depth in range(max_depth + 1):
        for node in level:
            out.append(Ray(sibling_midpoint(node)))
        level = [n + b for n in level for b in "01"]
    return out


@dataclass(frozen=True)
class AffineMap:
    """p -> translation + scale * p with scale > 0."""

    scale: Fraction
    translation: QPoint

    def __init__(self, scale, translation: QPoint):
        scale = _frac(scale)
        if scale <= 0:
            raise ValueError("scale must be positive")
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "translation", translation)

    def __call__(self, p: QPoint) -> QPoint:
        return QPoint(self.translation.x + self.scale * p.x,
                      self.translation.y + self.scale * p.y)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other."""
        return AffineMap(self.scale * other.scale, self(other.translation))

    def apply_disc(self, d: Disc) -> Disc:
        return Disc(self(d.center), self.scale ** 2 * d.radius_sq, d.mode)


_SIGMA = {
    "0": AffineMap(Fraction(1, 2), QPoint(1, 0)),
    "1": AffineMap(Fraction(1, 2), QPoint(0, 1)),
}


def similarity_for(node: NodeId) -> AffineMap:
    """The contraction carrying the whole tree onto the subtree below
    `node`; sends the origin to the node's embedding."""
    acc = AffineMap(Fraction(1), QPoint(0, 0))
    for bit in node:
        if bit not in _SIGMA:
            raise ValueError(f"node ids are bit strings, got {node!r}")
        acc = acc.compose(_SIGMA[bit])
    return acc


def dist2_to_obstacle(p: QPoint, obstacle: Obstacle) -> Fraction:
    """Exact squared distance from a point to an obstacle."""
    if isinstance(obstacle, Line):
        return (p.x - p.y + obstacle.c) ** 2 / 2
    vx = p.x - obstacle.origin.x
    vy = p.y - obstacle.origin.y
    if vx + vy >= 0:
        return (vx - vy) ** 2 / 2
    return vx * vx + vy * vy


def disc_avoids(d: Disc, obs: Iterable[Obstacle]) -> bool:
    """Is the disc disjoint from every obstacle? Closed discs need the
    squared clearance strictly above radius_sq; open discs allow touch."""
    for o in obs:
        d2 = dist2_to_obstacle(d.center, o)
        if d.mode == CLOSED:
            if d2 <= d.radius_sq:
                return False
        else:
            if d2 < d.radius_sq:
                return False
    return True


class ObstacleSet:
    """Obstacle list plus float shadows for fast screening.

    The screen only routes: every obstacle whose float clearance is not
    safely positive is re-checked exactly, so verdicts stay exact.
    """

    def __init__(self, items: Sequence[Obstacle]):
        self.items = list(items)
        line_idx, line_c, ray_idx, ray_ox, ray_oy = [], [], [], [], []
        for k, o in enumerate(self.items):
            if isinstance(o, Line):
                line_idx.append(k)
                line_c.append(float(o.c))
            else:
                ray_idx.append(k)
                ray_ox.append(float(o.origin.x))
                ray_oy.append(float(o.origin.y))
        self._line_idx = np.asarray(line_idx, dtype=np.int64)
        self._line_c = np.asarray(line_c, dtype=np.float64)
        self._ray_idx = np.asarray(ray_idx, dtype=np.int64)
        self._ray_ox = np.asarray(ray_ox, dtype=np.float64)
        self._ray_oy = np.asarray(ray_oy, dtype=np.float64)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def _suspects(self, center: QPoint, r2: Fraction) -> list[int]:
        """Indices whose exact clearance may be at or below r2.

        Quantities here are a handful of products of inputs, so the
        float error is below ~1e-12 * scale; the band is far wider.
        """
        cx, cy, r = float(center.x), float(center.y), float(r2)
        band = 1e-9 * 64.0 * (1.0 + cx * cx + cy * cy + abs(r))
        out = []
        if self._line_idx.size:
            margin = (cx - cy + self._line_c) ** 2 * 0.5 - r
            out.extend(self._line_idx[margin < band])
        if self._ray_idx.size:
            sx = cx - self._ray_ox
            sy = cy - self._ray_oy
            d2 = np.where(sx + sy >= 0.0, (sx - sy) ** 2 * 0.5, sx * sx + sy * sy)
            out.extend(self._ray_idx[d2 - r < band])
        return [int(i) for i in out]

    def violations(self, center: QPoint, r2: Fraction) -> list[int]:
        """Indices of obstacles with exact squared clearance <= r2."""
        bad = []
        for k in self._suspects(center, r2):
            if dist2_to_obstacle(center, self.items[k]) <= r2:
                bad.append(k)
        return bad

    def exact_min_slack(self, center: QPoint, r2: Fraction) -> Fraction:
        """A positive lower bound on min clearance minus r2, assuming no
        violations; exact on suspects, band-certified elsewhere."""
        cx, cy, r = float(center.x), float(center.y), float(r2)
        band = 1e-9 * 64.0 * (1.0 + cx * cx + cy * cy + abs(r))
        slack = Fraction(band).limit_denominator(10 ** 12) / 2
        for k in self._suspects(center, r2):
            gap = dist2_to_obstacle(center, self.items[k]) - r2
            if gap <= 0:
                raise ValueError("disc violates an obstacle")
            slack = min(slack, gap)
        return slack


# --- one-parameter disc family through two points -----------------------


class _Pencil:
    """Discs with p and q on the boundary: centre m + t*rot90(q - p),
    squared radius s2/4 + s2*t^2."""

    def __init__(self, p: QPoint, q: QPoint):
        self.p, self.q = p, q
        dx, dy = q.x - p.x, q.y - p.y
        self.mx = (p.x + q.x) / 2
        self.my = (p.y + q.y) / 2
        self.wx, self.wy = -dy, dx
        self.s2 = dx * dx + dy * dy

    def center(self, t: Fraction) -> QPoint:
        return QPoint(self.mx + t * self.wx, self.my + t * self.wy)

    def radius_sq(self, t: Fraction) -> Fraction:
        return self.s2 / 4 + self.s2 * t * t

    def breakpoints(self, o: Obstacle) -> list[QuadAlg]:
        """Parameters where the clearance-to-obstacle constraint can
        change sign or switch ray pieces."""
        s2 = self.s2
        out: list[QuadAlg] = []
        if isinstance(o, Line):
            u0 = self.mx - self.my + o.c
            u1 = self.wx - self.wy
            # (u0 + u1 t)^2 / 2 - s2/4 - s2 t^2
            out += quad_roots(u1 * u1 / 2 - s2, u0 * u1, u0 * u0 / 2 - s2 / 4)
            return out
        e0x = self.mx - o.origin.x
        e0y = self.my - o.origin.y
        sig0, sig1 = e0x + e0y, self.wx + self.wy
        if sig1 != 0:
            out.append(QuadAlg(Fraction(-sig0, 1) / sig1))  # piece split
        v0, v1 = e0x - e0y, self.wx - self.wy
        out += quad_roots(v1 * v1 / 2 - s2, v0 * v1, v0 * v0 / 2 - s2 / 4)
        # endpoint piece: |e|^2 - rho is linear in t
        out += quad_roots(Fraction(0), 2 * (e0x * self.wx + e0y * self.wy),
                          e0x * e0x + e0y * e0y - s2 / 4)
        return out

    def clears(self, t: Fraction, items: Sequence[Obstacle]) -> bool:
        c = self.center(t)
        r2 = self.radius_sq(t)
        return all(dist2_to_obstacle(c, o) > r2 for o in items)


def _cell_samples(breaks: list[QuadAlg]) -> list[Fraction]:
    """One exact rational inside every maximal breakpoint-free cell."""
    if not breaks:
        return [Fraction(0)]
    breaks = sorted(breaks, key=cmp_to_key(lambda a, b: -1 if a < b else (1 if b < a else 0)))
    distinct: list[QuadAlg] = []
    for x in breaks:
        if not distinct or distinct[-1] < x:
            distinct.append(x)
    lo = distinct[0].bounds()[0]
    hi = distinct[-1].bounds()[1]
    samples = [Fraction(math.floor(lo) - 1), Fraction(math.floor(hi) + 2)]
    for a, b in zip(distinct, distinct[1:]):
        samples.append(rational_between(a, b))
    # rational breakpoints themselves can satisfy strict constraints
    samples.extend(x.as_fraction() for x in distinct if x.is_rational)
    return samples


def _feasible_param(pencil: _Pencil, items: Sequence[Obstacle]) -> Fraction | None:
    breaks: list[QuadAlg] = []
    for o in items:
        breaks.extend(pencil.breakpoints(o))
    for t in _cell_samples(breaks):
        if pencil.clears(t, items):
            return t
    return None


def _witness(pencil: _Pencil, t: Fraction, obs: ObstacleSet, mode: str) -> Disc:
    center = pencil.center(t)
    r2 = pencil.radius_sq(t)
    if mode == CLOSED:
        return Disc(center, r2, CLOSED)
    slack = obs.exact_min_slack(center, r2)
    return Disc(center, r2 + slack / 2, OPEN)


def _disc_search(p: QPoint, q: QPoint, obs: ObstacleSet, mode: str,
                 seed: Iterable[int] = ()) -> Disc | None:
    """Lazy exact search: decide feasibility against a growing active
    subset, then verify candidates against the whole set. Infeasibility
    against a subset is already final."""
    pencil = _Pencil(p, q)
    active: list[int] = []
    in_active = set()
    for k in seed:
        if k not in in_active:
            in_active.add(k)
            active.append(k)
    for _ in range(len(obs) + 1):
        t = _feasible_param(pencil, [obs.items[k] for k in active])
        if t is None:
            return None
        bad = obs.violations(pencil.center(t), pencil.radius_sq(t))
        fresh = [k for k in bad if k not in in_active]
        if not fresh:
            return _witness(pencil, t, obs, mode)
        for k in fresh:
            in_active.add(k)
            active.append(k)
    raise RuntimeError("constraint generation failed to terminate")  # pragma: no cover


def disc_exists(p: QPoint, q: QPoint, obs: Iterable[Obstacle], mode: str = CLOSED) -> Disc | None:
    """A disc of the given mode containing p and q and avoiding every
    obstacle, or None.

    Complete over all discs: any disc containing both points contains a
    disc of the boundary family through them, so deciding the family
    decides everything. Witnesses come back with rational data; open
    witnesses are inflated so p and q are interior.
    """
    if p == q:
        raise ValueError("need two distinct points")
    if mode not in (OPEN, CLOSED):
        raise ValueError(f"unknown disc mode {mode!r}")
    oset = obs if isinstance(obs, ObstacleSet) else ObstacleSet(list(obs))
    return _disc_search(p, q, oset, mode)


# --- the relation over embedded nodes ------------------------------------


def _all_nodes(depth: int) -> list[NodeId]:
    out = [""]
    level = [""]
    for _ in range(depth):
        level = [n + b for n in level for b in "01"]
        out.extend(level)
    return out


def tree_adjacency(depth: int) -> set[tuple[NodeId, NodeId]]:
    """Parent-child pairs among nodes of length <= depth."""
    return {
        (n, n + b)
        for n in _all_nodes(depth - 1) if depth >= 1
        for b in "01"
    }


def _pair_key(a: NodeId, b: NodeId) -> tuple[NodeId, NodeId]:
    return (a, b) if (len(a), a) <= (len(b), b) else (b, a)


# verified root witnesses: the two children of the origin, mirror images
_ROOT_WITNESS = {
    "1": Disc(QPoint(Fraction(-1, 4), Fraction(1, 2)), Fraction(4, 9), CLOSED),
    "0": Disc(QPoint(Fraction(1, 2), Fraction(-1, 4)), Fraction(4, 9), CLOSED),
}

OBSTACLE_MARGIN = 4  # extra ray depth when truncating the forbidden set


def tilde_relation(depth: int, mode: str = CLOSED) -> set[tuple[NodeId, NodeId]]:
    """All pairs of distinct nodes of length <= depth joined by a disc
    avoiding the truncated forbidden set (rays to depth + margin)."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    nodes = _all_nodes(depth)
    oset = ObstacleSet(obstacles(depth + OBSTACLE_MARGIN))
    ray_index_of = {o.origin: k for k, o in enumerate(oset.items) if isinstance(o, Ray)}
    related: set[tuple[NodeId, NodeId]] = set()

    def seed_for(a: NodeId, b: NodeId) -> list[int]:
        idx = [0, 1]
        for s in (a, b):
            for cut in range(len(s)):
                k = ray_index_of.get(sibling_midpoint(s[:cut]))
                if k is not None:
                    idx.append(k)
        return sorted(set(idx))

    for a, b in combinations(nodes, 2):
        a, b = _pair_key(a, b)
        pa, pb = embed_node(a), embed_node(b)
        if len(b) == len(a) + 1 and b[:-1] == a:
            cand = similarity_for(a).apply_disc(_ROOT_WITNESS[b[-1]])
            if (dist2(cand.center, pa) < cand.radius_sq
                    and dist2(cand.center, pb) < cand.radius_sq
                    and not oset.violations(cand.center, cand.radius_sq)):
                related.add((a, b))
                continue
        if _disc_search(pa, pb, oset, mode, seed=seed_for(a, b)) is not None:
            related.add((a, b))
    return related


# --- circle lemma harness -------------------------------------------------


def _orient(a: QPoint, b: QPoint, c: QPoint) -> int:
    v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    return (v > 0) - (v < 0)


def circle_lemma_check(center: QPoint, radius_sq: Fraction,
                       a: QPoint, b: QPoint, c: QPoint, d: QPoint,
                       disc: Disc) -> bool:
    """With a, b, c, d in cyclic order on the given circle and the disc
    containing a and c: does the disc also contain b or d?"""
    radius_sq = _frac(radius_sq)
    for name, pt in (("a", a), ("b", b), ("c", c), ("d", d)):
        if dist2(center, pt) != radius_sq:
            raise ValueError(f"point {name} is not on the circle")
    signs = {_orient(a, b, c), _orient(b, c, d), _orient(c, d, a), _orient(d, a, b)}
    if len(signs) != 1 or 0 in signs:
        raise ValueError("points are not in cyclic order on the circle")
    if not (disc.contains(a) and disc.contains(c)):
        raise ValueError("disc must contain a and c")
    return disc.contains(b) or disc.contains(d)


# --- spacetime accessibility ----------------------------------------------


IRREFLEXIVE_SLOW = "irreflexive-slow"
IRREFLEXIVE_LIGHTSPEED = "irreflexive-lightspeed"
REFLEXIVE_SLOW = "reflexive-slow"
REFLEXIVE_LIGHTSPEED = "reflexive-lightspeed"
MINKOWSKI_KINDS = (
    IRREFLEXIVE_SLOW, IRREFLEXIVE_LIGHTSPEED, REFLEXIVE_SLOW, REFLEXIVE_LIGHTSPEED,
)


@dataclass(frozen=True)
class Event:
    """Spatial coordinates plus a time coordinate, all exact rationals."""

    space: tuple[Fraction, ...]
    t: Fraction

    def __init__(self, space: Iterable, t):
        space = tuple(_frac(x) for x in space)
        if not space:
            raise ValueError("need at least one space dimension")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "t", _frac(t))


def minkowski_related(e1: Event, e2: Event, kind: str) -> bool:
    """Accessibility between events: e2 after e1 within the light cone,
    strictly inside it for the slower-than-light kinds; the reflexive
    kinds also relate an event to itself."""
    if kind not in MINKOWSKI_KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if len(e1.space) != len(e2.space):
        raise ValueError("events live in different dimensions")
    if kind.startswith("reflexive") and e1 == e2:
        return True
    if not e1.t < e2.t:
        return False
    spatial = sum((x - y) ** 2 for x, y in zip(e1.space, e2.space))
    gap = (e2.t - e1.t) ** 2
    if kind.endswith("lightspeed"):
        return spatial <= gap
    return spatial < gap


def cone_section(z: Event, kind: str) -> Disc:
    """Intersection of the past light cone of `z` with the plane t = 0:
    a disc around its spatial part, closed exactly when lightspeed
    connections count."""
    if kind not in MINKOWSKI_KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if len(z.space) != 2:
        raise ValueError("cone sections live in two space dimensions")
    if not z.t > 0:
        raise ValueError("event must lie strictly above the plane")
    mode = CLOSED if kind.endswith("lightspeed") else OPEN
    return Disc(QPoint(z.space[0], z.space[1]), z.t * z.t, mode)
