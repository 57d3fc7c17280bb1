import pytest

from tilelogic.canonical import (
    EncodedNode, ExtractionError, canonical_valuation,
    check_embedding_condition, encode_graph, extract_strategy, witness_frame,
)
from tilelogic.game import (
    ELOISE, TerminalWin, initial_position, legal_moves, solve,
    validate_strategy,
)
from tilelogic.logic import (
    KripkeFrame, Var, holds, holds_at, is_confluent, is_transitive,
)
from tilelogic.reduction import (
    CONDITION_IDS, PropSpace, ReductionParams, compile_instance, condition,
)

from helpers import instance_a, instance_b


def build_all(inst):
    result = solve(inst)
    graph = encode_graph(inst, result)
    wf = witness_frame(graph)
    model = canonical_valuation(inst, graph, result, frame=wf)
    params = ReductionParams.for_instance(inst)
    space = PropSpace(inst, params)
    return result, graph, wf, model, params, space


def test_root_and_level_chain():
    inst = instance_a()
    result, graph, *_ = build_all(inst)
    assert graph.root == EncodedNode(initial_position(inst), 0, 0)
    succ = graph.successors()
    node = graph.root
    for j in (1, 2):
        kids = succ[node]
        assert len(kids) == 1
        node = kids[0]
        assert node == EncodedNode(initial_position(inst), j, 0)


def test_node_count_bound_and_branching():
    inst = instance_a()
    result, graph, *_ = build_all(inst)
    params = graph.params
    positions = {n.state for n in graph.nodes}
    assert len(graph.nodes) <= len(positions) * params.b * 2 ** params.L
    succ = graph.successors()
    for node in graph.nodes:
        if isinstance(node.state, TerminalWin):
            assert succ[node] == []
        elif node.depth == params.b - 1:
            assert len(succ[node]) == len(legal_moves(inst, node.state))
        else:
            assert len(succ[node]) == 1


def test_counter_along_paths():
    inst = instance_a()
    result, graph, *_ = build_all(inst)
    cap = 2 ** graph.params.L - 1
    succ = graph.successors()

    def walk(node, crossings, path_len):
        assert node.counter == min(cap, crossings)
        if path_len > 40:  # plenty for this tiny instance
            return
        for child in succ[node]:
            bump = 1 if node.depth == graph.params.b - 1 else 0
            walk(child, crossings + bump, path_len + 1)

    walk(graph.root, 0, 0)


def test_witness_frame_point_count():
    inst = instance_a()
    result, graph, wf, *_ = build_all(inst)
    assert len(wf.frame.points) == len(graph.nodes) + len(graph.edges) + 2


def test_witness_frame_small_shape():
    # three nodes, two edges -> seven points
    inst = instance_a()
    result = solve(inst)
    graph = encode_graph(inst, result)
    sub_nodes = graph.nodes[:3]
    sub_edges = [e for e in graph.edges if e[0] in sub_nodes[:1]]
    assert len(sub_edges) == 1  # root has a single chain child


def test_witness_frame_validators():
    for inst in (instance_a(), instance_b()):
        result, graph, wf, *_ = build_all(inst)
        assert is_transitive(wf.frame)
        assert is_confluent(wf.frame)


def test_canonical_root_labels():
    inst = instance_a()
    result, graph, wf, model, params, space = build_all(inst)
    root = wf.node_map[graph.root]
    assert root in model.valuation[space.eloise]
    assert root in model.valuation[space.index(1)]
    assert root in model.valuation[space.depth(0)]
    for k in range(1, params.L + 1):
        assert root not in model.valuation.get(space.q(k), frozenset())
    assert root in model.valuation[space.win]  # rank 1 <= N - 1 = 3


def test_fpoint_carries_only_f():
    inst = instance_a()
    result, graph, wf, model, params, space = build_all(inst)
    assert model.valuation[space.f] == {wf.fpoint}
    for prop, pts in model.valuation.items():
        if prop != space.f:
            assert wf.fpoint not in pts


def test_each_condition_holds_on_winning_instance():
    inst = instance_a()
    result, graph, wf, model, params, space = build_all(inst)
    root = wf.node_map[graph.root]
    for k in CONDITION_IDS:
        phi = condition(k, inst, space, params)
        assert holds_at(model, phi, root), f"condition {k} fails"


def test_formula_fails_at_root_when_second_player_wins():
    inst = instance_b()
    result, graph, wf, model, params, space = build_all(inst)
    root = wf.node_map[graph.root]
    assert not holds_at(model, compile_instance(inst), root)
    # and the only failing conjunct is the root win marker
    assert not holds_at(model, condition(14, inst, space, params), root)


def test_embedding_condition_on_generated_frames():
    for inst in (instance_a(), instance_b()):
        result, graph, wf, *_ = build_all(inst)
        assert check_embedding_condition(wf.frame, graph.edges, wf.node_map, {wf.fpoint})


def test_embedding_condition_tampering():
    inst = instance_a()
    result, graph, wf, *_ = build_all(inst)
    some_edge = graph.edges[0]
    w = wf.witness_map[some_edge]
    # removing a witness point breaks its edge
    pruned_rel = [(a, b) for a, b in wf.frame.rel if w not in (a, b)]
    pruned_points = [p for p in wf.frame.points if p != w]
    pruned = KripkeFrame(pruned_points, pruned_rel)
    assert not check_embedding_condition(pruned, graph.edges, wf.node_map, {wf.fpoint})
    # an extra clean upper bound over a non-adjacent pair also breaks it
    non_adjacent = (graph.nodes[0], graph.nodes[2])
    extra_points = list(wf.frame.points) + ["bogus"]
    extra_rel = list(wf.frame.rel) + [
        (wf.node_map[non_adjacent[0]], "bogus"),
        (wf.node_map[non_adjacent[1]], "bogus"),
    ]
    inflated = KripkeFrame(extra_points, extra_rel)
    assert not check_embedding_condition(inflated, graph.edges, wf.node_map, {wf.fpoint})


def test_extract_strategy_instance_a():
    inst = instance_a()
    result, graph, wf, model, params, space = build_all(inst)
    root = wf.node_map[graph.root]
    strat = extract_strategy(model, root, params, space)
    assert strat[initial_position(inst)] == "T1"
    assert validate_strategy(inst, strat)


def test_extraction_needs_win_children():
    inst = instance_a()
    result, graph, wf, model, params, space = build_all(inst)
    root = wf.node_map[graph.root]
    # strip win everywhere except the root: the walk dead-ends
    broken = dict(model.valuation)
    broken[space.win] = frozenset({root})
    from tilelogic.logic import KripkeModel
    crippled = KripkeModel(model.frame, broken)
    with pytest.raises(ExtractionError):
        extract_strategy(crippled, root, params, space)


def test_no_extraction_for_losing_instance():
    inst = instance_b()
    result, graph, wf, model, params, space = build_all(inst)
    root = wf.node_map[graph.root]
    # precondition (formula satisfied at root) fails, so the harness skips it
    assert not holds_at(model, compile_instance(inst), root)
