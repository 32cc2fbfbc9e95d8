import random

import pytest

from stuttersim import (
    KripkeStructure,
    NotAPreorderError,
    RefinementEngine,
    ValidationError,
    check_preorder,
    compute_preorder,
    generate_random_ks,
    labeling_partition,
    naive_stuttering_simulation,
    pos_naive,
)
from stuttersim.reference import largest_simulation_within

from conftest import random_preorder

P4_BLOCKS = [[0, 1], [2, 3], [4, 5], [6, 7], [8, 9]]
P4_PAIRS = [(i, i) for i in range(5)] + [(0, 1), (0, 3), (2, 3), (4, 3)]


def p4_engine() -> RefinementEngine:
    k = KripkeStructure(10, [], [["a"]] * 10)
    return RefinementEngine(k, (P4_BLOCKS, P4_PAIRS))


def by_members(engine: RefinementEngine) -> dict[frozenset, int]:
    return {frozenset(engine.members(b)): b for b in engine.order}


# -- initialization -------------------------------------------------------


def test_initialize_f2_counters(f2):
    e = RefinementEngine(f2)
    b_p = e.block_of[0]
    b_q = e.block_of[1]
    b_r = e.block_of[2]
    expected = {(0, b_q): 1, (0, b_r): 1, (3, b_q): 1}
    for x in range(5):
        for c in e.order:
            assert e.count[x][c] == expected.get((x, c), 0)
    assert e.blocks[b_p].local_bottoms == [0, 3]
    assert e.blocks[b_q].local_bottoms == [1, 4]
    for b in e.order:
        assert e.blocks[b].bottom_blocks == []
    assert e.bcount[b_p][b_q] == 2 and e.bcount[b_p][b_r] == 1


def test_initialize_no_transitions_all_bottom():
    k = KripkeStructure(4, [], [["a"], ["a"], ["b"], ["b"]])
    e = RefinementEngine(k)
    for x in range(4):
        for c in e.order:
            assert e.count[x][c] == 0
    for b in e.order:
        assert e.blocks[b].local_bottoms == e.members(b)


def test_initialize_f1_local_bottoms(f1):
    e = RefinementEngine(f1)
    assert e.blocks[e.block_of[0]].local_bottoms == [0, 2]


def test_initialize_rejects_non_preorder(f2):
    blocks = [[0, 3], [1, 4], [2]]
    with pytest.raises(NotAPreorderError):
        RefinementEngine(f2, (blocks, [(0, 0), (1, 1)]))  # not reflexive
    k = KripkeStructure(3, [], [["a"], ["a"], ["a"]])
    pairs = [(i, i) for i in range(3)] + [(0, 1), (1, 2)]
    with pytest.raises(NotAPreorderError):
        RefinementEngine(k, ([[0], [1], [2]], pairs))  # not transitive


def test_initialize_rejects_label_violations(f2):
    with pytest.raises(ValidationError, match="offending block"):
        RefinementEngine(f2, ([[0, 1], [2], [3], [4]], [(i, i) for i in range(4)]))
    pairs = [(i, i) for i in range(3)] + [(0, 2)]
    with pytest.raises(ValidationError, match="offending block"):
        RefinementEngine(f2, ([[0, 3], [1, 4], [2]], pairs))


def test_initialize_rejects_order_incompatible_candidate():
    # {0} below {1} forces {1} first in the block list, but the
    # transition 0 -> 1 between same-label states forces 0 first.
    k = KripkeStructure(2, [(0, 1)], [["p"], ["p"]])
    pairs = [(0, 0), (1, 1), (0, 1)]
    with pytest.raises(ValidationError, match="no valid list ordering"):
        RefinementEngine(k, ([[0], [1]], pairs))


# -- queries --------------------------------------------------------------


def test_image_is_ordered_sublist():
    e = p4_engine()
    b0 = e.block_of[0]
    img = e.image(b0)
    assert set(img) == {0, 1, 2, 3, 6, 7}
    positions = [e.position[s] for s in img]
    assert positions == sorted(positions)
    b2 = e.block_of[4]
    assert set(e.image(b2)) == {4, 5, 6, 7}


def test_pos_ordered_empty(f1):
    e = RefinementEngine(f1)
    assert e.pos_ordered([], [3, 4]) == []


def test_pos_ordered_f1(f1):
    e = RefinementEngine(f1)
    src = e.image(e.block_of[0])
    dst = e.image(e.block_of[3])
    assert e.pos_ordered(src, dst) == [0, 1, 2]
    assert not any(e.mark1) and not any(e.mark2)


def test_pos_ordered_f2(f2):
    e = RefinementEngine(f2)
    assert e.pos_ordered([0, 3], [2]) == [0]


@pytest.mark.parametrize("seed", range(40))
def test_pos_ordered_matches_naive(seed):
    k = generate_random_ks(9000 + seed, 2 + seed % 8, 0.35, 1 + seed % 3)
    e = RefinementEngine(k)
    rng = random.Random(seed)
    for b in e.order:
        src = e.image(b)
        t = [s for s in e.state_list if rng.random() < 0.5]
        assert set(e.pos_ordered(src, t)) == pos_naive(e.k, src, t)


def test_find_refiner_f2_initial(f2):
    e = RefinementEngine(f2)
    assert e.find_refiner() == (e.block_of[0], e.block_of[2])


def test_find_refiner_absent_at_fixpoint(f1):
    e = RefinementEngine(f1)
    assert e.find_refiner() is None  # the label partition already works


def test_find_refiner_no_transitions():
    k = KripkeStructure(3, [], [["a"], ["a"], ["a"]])
    assert RefinementEngine(k).find_refiner() is None


# -- refinement steps -----------------------------------------------------


def test_split_union_of_blocks_is_noop(f2):
    e = RefinementEngine(f2)
    before = list(e.order)
    assert e.split([1, 4]) == []
    assert e.order == before


def test_split_f2(f2):
    e = RefinementEngine(f2)
    parent = e.block_of[0]
    split_ids = e.split([0])
    assert split_ids == [parent]
    new = e.block_of[0]
    assert e.members(new) == [0] and e.members(parent) == [3]
    assert e.order.index(new) == e.order.index(parent) - 1
    assert e.blocks[parent].intersection == new


def test_splitting_procedure_union_noop(f2):
    e = RefinementEngine(f2)
    rel_before = [bytes(row) for row in e.rel]
    e.splitting_procedure([1, 4])
    assert [bytes(row) for row in e.rel] == rel_before


def test_splitting_procedure_f2_creates_mutual_pair(f2):
    e = RefinementEngine(f2)
    parent = e.block_of[0]
    e.splitting_procedure([0])
    new = e.block_of[0]
    assert e.rel[new][parent] and e.rel[parent][new]
    # candidate sets unchanged: both halves see the whole old block
    assert set(e.image(new)) == {0, 3} == set(e.image(parent))


def test_update_empty_is_noop(f2):
    e = RefinementEngine(f2)
    counts = [list(row) for row in e.count]
    e.update([])
    assert [list(row) for row in e.count] == counts


def test_update_f2_bookkeeping(f2):
    e = RefinementEngine(f2)
    parent = e.block_of[0]
    b_r = e.block_of[2]
    e.splitting_procedure([0])
    new = e.block_of[0]
    assert e.blocks[new].local_bottoms == [0]
    assert e.blocks[parent].local_bottoms == [3]
    assert e.bcount[new][b_r] == 1
    assert e.bcount[parent][b_r] == 0
    for x in range(5):
        assert e.count[x][new] == e.count[x][parent]
    # sibling halves hold each other's bottom states
    assert e.blocks[new].bottom_blocks == [parent]
    assert e.blocks[parent].bottom_blocks == [new]


def test_refine_f2_prunes_one_direction(f2):
    e = RefinementEngine(f2)
    parent = e.block_of[0]
    e.splitting_procedure([0])
    new = e.block_of[0]
    e.refine([0])
    assert not e.rel[new][parent]
    assert e.rel[parent][new]
    assert e.blocks[new].bottom_blocks == []
    assert e.blocks[parent].bottom_blocks == [new]


def test_refine_whole_state_set_removes_nothing():
    e = p4_engine()
    rel_before = [bytes(row) for row in e.rel]
    e.refine(list(e.state_list))
    assert [bytes(row) for row in e.rel] == rel_before


def test_selftest_goldens():
    from stuttersim.selftest import golden_checks

    for name, ok, detail in golden_checks():
        assert ok, f"{name}: {detail}"


# -- runs -----------------------------------------------------------------


def test_run_f1(f1):
    result = compute_preorder(f1)
    assert result.blocks == [[0, 1, 2], [3, 4]]
    assert result.preorder == frozenset({(0, 0), (1, 1)})


def test_run_f2(f2):
    result = compute_preorder(f2)
    assert result.blocks == [[0], [1, 4], [2], [3]]
    assert result.strict_block_pairs() == [(3, 0)]
    assert result.related(3, 0) and not result.related(0, 3)
    assert result.related(1, 4) and result.related(4, 1)


def test_run_single_state_self_loop():
    k = KripkeStructure(1, [(0, 0)], [["p"]])
    result = compute_preorder(k)
    assert result.blocks == [[0]]
    assert result.preorder == frozenset({(0, 0)})


def test_run_empty_structure():
    result = compute_preorder(KripkeStructure(0, [], []))
    assert result.blocks == [] and result.preorder == frozenset()


def test_run_regression_new_bottom_inside_pruned_block():
    # After the first split, pruning pushes a fresh local bottom into
    # the splitter block itself; with stale bookkeeping the refiner
    # (block{0,1}, block{4}) is missed and 0,1 end up conflated.
    k = KripkeStructure(
        5, [(0, 2), (0, 3), (1, 3), (1, 4)], [["a"], ["a"], ["a"], ["b"], ["c"]]
    )
    result = compute_preorder(k, debug=True)
    assert result.blocks == [[0], [1], [2], [3], [4]]
    assert result.state_pairs() == naive_stuttering_simulation(k)


def test_run_trace_hook(f2):
    events = []
    compute_preorder(f2, trace=lambda *args: events.append(args))
    assert events
    assert [e[0] for e in events] == list(range(1, len(events) + 1))
    for _, pair, size, num_blocks in events:
        assert len(pair) == 2 and size >= 1 and num_blocks >= 3


@pytest.mark.parametrize("seed", range(60))
def test_run_matches_oracle(seed):
    k = generate_random_ks(11_000 + seed, 2 + seed % 8, (0.15, 0.3, 0.5)[seed % 3], 1 + seed % 3)
    assert compute_preorder(k).state_pairs() == naive_stuttering_simulation(k)


@pytest.mark.parametrize("seed", range(25))
def test_run_debug_invariants(seed):
    k = generate_random_ks(12_000 + seed, 2 + seed % 12, 0.3, 1 + seed % 4)
    compute_preorder(k, debug=True)


@pytest.mark.parametrize("seed", range(25))
def test_refiner_absent_iff_checker_accepts(seed):
    k = generate_random_ks(13_000 + seed, 2 + seed % 7, 0.35, 1 + seed % 3)
    e = RefinementEngine(k)
    while True:
        found = e.find_refiner()
        verdict = check_preorder(e.k, e.current_state_pairs())
        assert verdict.accepted == (found is None)
        if found is None:
            break
        splitter = e.pos_ordered(e.image(found[0]), e.image(found[1]))
        e.splitting_procedure(splitter)
        e.refine(splitter)


@pytest.mark.parametrize("seed", range(30))
def test_result_preorder_shape(seed):
    k = generate_random_ks(16_000 + seed, 2 + seed % 8, 0.35, 1 + seed % 3)
    result = compute_preorder(k)
    m = len(result.blocks)
    for i in range(m):
        assert (i, i) in result.preorder
    for i, j in result.preorder:
        if i != j:  # blocks are the symmetric reduction classes
            assert (j, i) not in result.preorder
        for l in range(m):
            if (j, l) in result.preorder:
                assert (i, l) in result.preorder


@pytest.mark.parametrize("seed", range(40))
def test_run_stats_bounds(seed):
    k = generate_random_ks(14_000 + seed, 2 + seed % 8, 0.3, 1 + seed % 3)
    result = compute_preorder(k)
    stats = result.stats
    assert stats.final_blocks == len(result.blocks)
    assert stats.iterations <= len(result.blocks) ** 2
    assert stats.blocks_created == 2 * (stats.final_blocks - stats.initial_blocks)
    assert stats.initial_blocks == len(labeling_partition(k))


# -- candidate relations --------------------------------------------------


def test_candidate_mutual_blocks_merge_in_result():
    k = KripkeStructure(2, [], [["a"], ["a"]])
    pairs = [(0, 0), (1, 1), (0, 1), (1, 0)]
    result = compute_preorder(k, ([[0], [1]], pairs))
    assert result.blocks == [[0, 1]]
    assert result.preorder == frozenset({(0, 0)})


def test_candidate_run_computes_largest_contained_simulation(f2):
    # cap the relation below the full preorder: {1} and {4} stay apart
    blocks = [[0], [1], [2], [3], [4]]
    pairs = [(i, i) for i in range(5)] + [(3, 0), (1, 4)]
    result = compute_preorder(f2, (blocks, pairs), debug=True)
    expected = largest_simulation_within(
        f2, {(s, s) for s in range(5)} | {(3, 0), (1, 4)}
    )
    assert result.state_pairs() == expected


@pytest.mark.parametrize("seed", range(40))
def test_candidate_run_random(seed):
    rng = random.Random(seed)
    k = generate_random_ks(15_000 + seed, 2 + seed % 6, 0.3, 1 + seed % 3)
    rel = random_preorder(rng, k)
    classes: list[list[int]] = []
    assigned: dict[int, int] = {}
    for s in k.states():
        if s in assigned:
            continue
        members = [t for t in k.states() if (s, t) in rel and (t, s) in rel]
        for t in members:
            assigned[t] = len(classes)
        classes.append(members)
    pairs = {
        (assigned[s], assigned[t]) for s, t in rel
    }
    try:
        result = compute_preorder(k, (classes, pairs))
    except ValidationError:
        return  # candidate block order incompatible with the topology
    assert result.state_pairs() == largest_simulation_within(k, rel)
