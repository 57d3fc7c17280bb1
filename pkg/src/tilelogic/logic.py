"""Tense logic with future/past modalities over finite Kripke models.

Formulas are immutable and hash-consed: constructing the same shape twice
yields the same object, so structural equality is plain ``is`` and the
evaluator can memoise by identity. Evaluation labels every point of a
finite model with each subformula via numpy boolean masks; a slower
reference evaluator lives in the test suite.
"""

from __future__ import annotations

import re
import weakref
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

import numpy as np

__all__ = [
    "Formula", "Var", "Const", "Not", "And", "Or", "Implies", "Iff",
    "Future", "Past", "AlwaysFuture", "AlwaysPast", "TRUE", "FALSE",
    "conj", "disj", "formula_size", "collect_props", "normalize",
    "parse_formula", "print_formula", "FormulaSyntaxError",
    "KripkeFrame", "KripkeModel", "holds", "holds_at",
    "is_transitive", "is_confluent", "parse_model", "format_model",
]

_table: "weakref.WeakValueDictionary[tuple, Formula]" = weakref.WeakValueDictionary()


class Formula:
    """Base class for tense-logic formulas. Instances are interned."""

    __slots__ = ("__weakref__",)

    def __repr__(self) -> str:
        return print_formula(self)


def _interned(cls, key, fields):
    got = _table.get(key)
    if got is not None:
        return got
    self = object.__new__(cls)
    for name, value in fields:
        setattr(self, name, value)
    _table[key] = self
    return self


class Var(Formula):
    __slots__ = ("name",)

    def __new__(cls, name: str):
        return _interned(cls, (cls, name), [("name", name)])


class Const(Formula):
    __slots__ = ("value",)

    def __new__(cls, value: bool):
        return _interned(cls, (cls, bool(value)), [("value", bool(value))])


TRUE = Const(True)
FALSE = Const(False)


class _Unary(Formula):
    __slots__ = ("child",)

    def __new__(cls, child: Formula):
        return _interned(cls, (cls, child), [("child", child)])


class _Binary(Formula):
    __slots__ = ("left", "right")

    def __new__(cls, left: Formula, right: Formula):
        return _interned(cls, (cls, left, right), [("left", left), ("right", right)])


class Not(_Unary):
    __slots__ = ()


class Future(_Unary):
    """F: true where some successor satisfies the child."""

    __slots__ = ()


class Past(_Unary):
    """P: true where some predecessor satisfies the child."""

    __slots__ = ()


class AlwaysFuture(_Unary):
    """G: true where all successors satisfy the child."""

    __slots__ = ()


class AlwaysPast(_Unary):
    """H: true where all predecessors satisfy the child."""

    __slots__ = ()


class And(_Binary):
    __slots__ = ()


class Or(_Binary):
    __slots__ = ()


class Implies(_Binary):
    __slots__ = ()


class Iff(_Binary):
    __slots__ = ()


def conj(parts: Iterable[Formula]) -> Formula:
    """Left-fold conjunction; the empty conjunction is TRUE."""
    out = None
    for p in parts:
        out = p if out is None else And(out, p)
    return TRUE if out is None else out


def disj(parts: Iterable[Formula]) -> Formula:
    """Left-fold disjunction; the empty disjunction is FALSE."""
    out = None
    for p in parts:
        out = p if out is None else Or(out, p)
    return FALSE if out is None else out


def formula_size(phi: Formula) -> int:
    """Node count of the syntax tree; shared subterms count per occurrence."""
    memo: dict[int, int] = {}

    def size(f: Formula) -> int:
        got = memo.get(id(f))
        if got is not None:
            return got
        if isinstance(f, (Var, Const)):
            n = 1
        elif isinstance(f, _Unary):
            n = 1 + size(f.child)
        else:
            n = 1 + size(f.left) + size(f.right)
        memo[id(f)] = n
        return n

    return size(phi)


def collect_props(phi: Formula) -> frozenset[str]:
    """All proposition names occurring in the formula."""
    seen: set[int] = set()
    props: set[str] = set()
    stack = [phi]
    while stack:
        f = stack.pop()
        if id(f) in seen:
            continue
        seen.add(id(f))
        if isinstance(f, Var):
            props.add(f.name)
        elif isinstance(f, _Unary):
            stack.append(f.child)
        elif isinstance(f, _Binary):
            stack.append(f.left)
            stack.append(f.right)
    return frozenset(props)


def normalize(phi: Formula) -> Formula:
    """Rewrite into the {not, or, F, P} fragment (plus atoms)."""
    memo: dict[int, Formula] = {}

    def go(f: Formula) -> Formula:
        got = memo.get(id(f))
        if got is not None:
            return got
        if isinstance(f, (Var, Const)):
            out = f
        elif isinstance(f, Not):
            out = Not(go(f.child))
        elif isinstance(f, Future):
            out = Future(go(f.child))
        elif isinstance(f, Past):
            out = Past(go(f.child))
        elif isinstance(f, AlwaysFuture):
            out = Not(Future(Not(go(f.child))))
        elif isinstance(f, AlwaysPast):
            out = Not(Past(Not(go(f.child))))
        elif isinstance(f, Or):
            out = Or(go(f.left), go(f.right))
        elif isinstance(f, And):
            out = Not(Or(Not(go(f.left)), Not(go(f.right))))
        elif isinstance(f, Implies):
            out = Or(Not(go(f.left)), go(f.right))
        elif isinstance(f, Iff):
            a, b = go(f.left), go(f.right)
            fwd = Or(Not(a), b)
            bwd = Or(Not(b), a)
            out = Not(Or(Not(fwd), Not(bwd)))
        else:
            raise TypeError(f"unknown formula node {f!r}")
        memo[id(f)] = out
        return out

    return go(phi)


# --- text form ---------------------------------------------------------

_UNARY_TOKENS = {"not": Not, "F": Future, "P": Past, "G": AlwaysFuture, "H": AlwaysPast}
_BINARY_TOKENS = {"and": And, "or": Or, "implies": Implies, "iff": Iff}
_TOKEN_OF_UNARY = {v: k for k, v in _UNARY_TOKENS.items()}
_TOKEN_OF_BINARY = {v: k for k, v in _BINARY_TOKENS.items()}


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


_TOKEN_RE = re.compile(r"\(|\)|[^\s()]+")


def parse_formula(text: str) -> Formula:
    """Parse the s-expression grammar; round-trips with print_formula."""
    tokens = [(m.group(), m.start()) for m in _TOKEN_RE.finditer(text)]
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, len(text))

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def expr() -> Formula:
        tok, at = take()
        if tok is None:
            raise FormulaSyntaxError("unexpected end of input", at)
        if tok == "true":
            return TRUE
        if tok == "false":
            return FALSE
        if tok != "(":
            raise FormulaSyntaxError(f"unexpected token {tok!r}", at)
        head, hat = take()
        if head is None:
            raise FormulaSyntaxError("unexpected end of input", hat)
        if head == "var":
            name, nat = take()
            if name is None or name in ("(", ")"):
                raise FormulaSyntaxError("expected variable name", nat)
            out: Formula = Var(name)
        elif head in _UNARY_TOKENS:
            out = _UNARY_TOKENS[head](expr())
        elif head in _BINARY_TOKENS:
            left = expr()
            right = expr()
            out = _BINARY_TOKENS[head](left, right)
        else:
            raise FormulaSyntaxError(f"unknown operator {head!r}", hat)
        closer, cat = take()
        if closer != ")":
            raise FormulaSyntaxError("expected ')'", cat)
        return out

    out = expr()
    tok, at = peek()
    if tok is not None:
        raise FormulaSyntaxError(f"trailing input {tok!r}", at)
    return out


def print_formula(phi: Formula) -> str:
    if isinstance(phi, Const):
        return "true" if phi.value else "false"
    if isinstance(phi, Var):
        return f"(var {phi.name})"
    if isinstance(phi, _Unary):
        return f"({_TOKEN_OF_UNARY[type(phi)]} {print_formula(phi.child)})"
    return (
        f"({_TOKEN_OF_BINARY[type(phi)]} "
        f"{print_formula(phi.left)} {print_formula(phi.right)})"
    )


# --- frames and models -------------------------------------------------


@dataclass(eq=False)
class KripkeFrame:
    """A finite set of points with an accessibility relation."""

    points: frozenset
    rel: frozenset

    def __init__(self, points: Iterable, rel: Iterable[tuple]):
        self.points = frozenset(points)
        self.rel = frozenset((a, b) for a, b in rel)
        for a, b in self.rel:
            if a not in self.points or b not in self.points:
                raise ValueError(f"edge ({a!r}, {b!r}) uses unknown point")

    def successors(self) -> dict:
        succ: dict = {p: set() for p in self.points}
        for a, b in self.rel:
            succ[a].add(b)
        return succ

    def predecessors(self) -> dict:
        pred: dict = {p: set() for p in self.points}
        for a, b in self.rel:
            pred[b].add(a)
        return pred


def is_transitive(frame: KripkeFrame) -> bool:
    succ = frame.successors()
    for a, b in frame.rel:
        for c in succ[b]:
            if (a, c) not in frame.rel:
                return False
    return True


def is_confluent(frame: KripkeFrame) -> bool:
    """x < y, z implies some w with y < w and z < w."""
    succ = frame.successors()
    for x in frame.points:
        out = succ[x]
        for y in out:
            sy = succ[y]
            for z in out:
                if not any(w in sy for w in succ[z]):
                    return False
    return True


def _point_key(p):
    return (type(p).__name__, str(p))


class _Labeler:
    """Bitset evaluator: one boolean mask per distinct subformula."""

    def __init__(self, model: "KripkeModel"):
        self.model = model
        self.points = sorted(model.frame.points, key=_point_key)
        self.index = {p: i for i, p in enumerate(self.points)}
        n = len(self.points)
        edges = sorted(model.frame.rel, key=lambda e: (_point_key(e[0]), _point_key(e[1])))
        self.src = np.fromiter((self.index[a] for a, _ in edges), dtype=np.int64, count=len(edges))
        self.dst = np.fromiter((self.index[b] for _, b in edges), dtype=np.int64, count=len(edges))
        self.n = n
        self._props: dict[str, np.ndarray] = {}
        # keyed by the formula object itself: keeps it alive, so interned
        # ids cannot be recycled under the cache between holds() calls
        self._memo: dict[Formula, np.ndarray] = {}

    def _prop(self, name: str) -> np.ndarray:
        arr = self._props.get(name)
        if arr is None:
            arr = np.zeros(self.n, dtype=bool)
            for p in self.model.valuation.get(name, ()):
                arr[self.index[p]] = True
            self._props[name] = arr
        return arr

    def eval(self, phi: Formula) -> np.ndarray:
        got = self._memo.get(phi)
        if got is not None:
            return got
        t = type(phi)
        if t is Var:
            out = self._prop(phi.name)
        elif t is Const:
            out = np.full(self.n, phi.value, dtype=bool)
        elif t is Not:
            out = ~self.eval(phi.child)
        elif t is And:
            out = self.eval(phi.left) & self.eval(phi.right)
        elif t is Or:
            out = self.eval(phi.left) | self.eval(phi.right)
        elif t is Implies:
            out = ~self.eval(phi.left) | self.eval(phi.right)
        elif t is Iff:
            out = self.eval(phi.left) == self.eval(phi.right)
        elif t is Future:
            child = self.eval(phi.child)
            out = np.zeros(self.n, dtype=bool)
            if self.src.size:
                out[self.src[child[self.dst]]] = True
        elif t is Past:
            child = self.eval(phi.child)
            out = np.zeros(self.n, dtype=bool)
            if self.src.size:
                out[self.dst[child[self.src]]] = True
        elif t is AlwaysFuture:
            child = self.eval(phi.child)
            out = np.ones(self.n, dtype=bool)
            if self.src.size:
                out[self.src[~child[self.dst]]] = False
        elif t is AlwaysPast:
            child = self.eval(phi.child)
            out = np.ones(self.n, dtype=bool)
            if self.src.size:
                out[self.dst[~child[self.src]]] = False
        else:
            raise TypeError(f"unknown formula node {phi!r}")
        self._memo[phi] = out
        return out


@dataclass(eq=False)
class KripkeModel:
    """A frame plus a valuation mapping proposition names to point sets.

    Treat as immutable once built; evaluation structures are cached.
    """

    frame: KripkeFrame
    valuation: Mapping[str, frozenset]

    def __init__(self, frame: KripkeFrame, valuation: Mapping[str, Iterable]):
        self.frame = frame
        fixed = {}
        for prop, pts in valuation.items():
            pts = frozenset(pts)
            if not pts <= frame.points:
                raise ValueError(f"valuation of {prop!r} mentions unknown points")
            fixed[prop] = pts
        self.valuation = fixed
        self._labeler: _Labeler | None = None

    def labeler(self) -> _Labeler:
        if self._labeler is None:
            self._labeler = _Labeler(self)
        return self._labeler


def holds(model: KripkeModel, phi: Formula) -> frozenset:
    """Set of points where the formula is true."""
    lab = model.labeler()
    arr = lab.eval(phi)
    return frozenset(lab.points[i] for i in np.nonzero(arr)[0])


def holds_at(model: KripkeModel, phi: Formula, x) -> bool:
    lab = model.labeler()
    i = lab.index.get(x)
    if i is None:
        raise ValueError(f"unknown point {x!r}")
    return bool(lab.eval(phi)[i])


# --- model text format --------------------------------------------------


def parse_model(text: str) -> KripkeModel:
    """Read the line format: point/edge/label lines, '#' comments."""
    points: list = []
    edges: list[tuple] = []
    labels: dict[str, set] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "point" and len(parts) == 2:
            points.append(parts[1])
        elif kind == "edge" and len(parts) == 3:
            edges.append((parts[1], parts[2]))
        elif kind == "label" and len(parts) == 3:
            labels.setdefault(parts[2], set()).add(parts[1])
        else:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}")
    frame = KripkeFrame(points, edges)
    for prop, pts in labels.items():
        unknown = pts - frame.points
        if unknown:
            raise ValueError(f"label {prop!r} on unknown point(s) {sorted(unknown)}")
    return KripkeModel(frame, labels)


def format_model(model: KripkeModel) -> str:
    lines = []
    for p in sorted(model.frame.points, key=_point_key):
        lines.append(f"point {p}")
    for a, b in sorted(model.frame.rel, key=lambda e: (_point_key(e[0]), _point_key(e[1]))):
        lines.append(f"edge {a} {b}")
    for prop in sorted(model.valuation):
        for p in sorted(model.valuation[prop], key=_point_key):
            lines.append(f"label {p} {prop}")
    return "\n".join(lines) + "\n"
