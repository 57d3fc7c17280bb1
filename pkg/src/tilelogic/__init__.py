"""Corridor tiling games, the tense-logic formulas they compile to,
canonical models certifying the equivalence, and the exact plane
geometry realising the required tree embedding."""

from .game import (
    ABELARD, ELOISE, INFINITE_RANK, WHITE,
    GameInstance, IllegalMoveError, Position, SolveResult, TerminalWin, TileType,
    apply, compatible, enumerate_positions, format_instance, initial_position,
    legal_moves, optimal_strategy, parse_instance, solve, validate_instance,
    validate_strategy,
)
from .logic import (
    And, AlwaysFuture, AlwaysPast, Const, FALSE, Formula, FormulaSyntaxError,
    Future, Iff, Implies, KripkeFrame, KripkeModel, Not, Or, Past, TRUE, Var,
    collect_props, conj, disj, format_model, formula_size, holds, holds_at,
    is_confluent, is_transitive, normalize, parse_formula, parse_model,
    print_formula,
)
from .reduction import (
    IndexDepth, PropSpace, ReductionParams, beta, beta_any, box,
    branching_factor, bump, compile_instance, condition, counter_equals,
    diamond, universally,
)
from .canonical import (
    EncodedGraph, EncodedNode, ExtractionError, WitnessFrame,
    canonical_valuation, check_embedding_condition, encode_graph,
    extract_strategy, witness_frame,
)
from .geometry import (
    AffineMap, CLOSED, Disc, Event, Line, OPEN, ObstacleSet, QPoint, Ray,
    circle_lemma_check, cone_section, disc_avoids, disc_exists, dist2,
    dist2_to_obstacle, embed_node, minkowski_related, obstacles,
    sibling_midpoint, similarity_for, tilde_relation, tree_adjacency,
)
from .quadalg import QuadAlg, quad_roots, rational_between
from .harness import InstanceReport, generate_family, run_family, run_instance

__version__ = "0.1.0"
