import random

import pytest

from stuttersim import (
    KripkeStructure,
    NotAPreorderError,
    ValidationError,
    check_definition,
    check_preorder,
    compute_preorder,
    generate_random_ks,
    naive_stuttering_simulation,
)
from stuttersim.checker import find_definition_violation
from stuttersim.reference import largest_simulation_within

from conftest import random_preorder, transitive_closure


def test_accepts_computed_preorder(f2):
    pairs = compute_preorder(f2).state_pairs()
    assert check_preorder(f2, pairs).accepted


def test_rejects_label_closure_with_block_witness(f2):
    pairs = {
        (s, t) for s in range(5) for t in range(5) if f2.labels[s] == f2.labels[t]
    }
    verdict = check_preorder(f2, pairs)
    assert not verdict.accepted
    b, c, state = verdict.refiner_witness
    assert set(b) == {0, 3} and set(c) == {2}
    assert state == 3


def test_identity_always_accepted():
    for k in (
        KripkeStructure(3, [(0, 0), (0, 1), (1, 0), (1, 2)], [["p"], ["p"], ["q"]]),
        generate_random_ks(4, 6, 0.5, 2),
        generate_random_ks(5, 6, 0.9, 1),
    ):
        ident = {(s, s) for s in k.states()}
        assert check_preorder(k, ident).accepted
        assert check_definition(k, ident)


def test_rejects_mixed_label_pair():
    k = KripkeStructure(2, [], [["p"], ["q"]])
    verdict = check_preorder(k, {(0, 0), (1, 1), (0, 1)})
    assert not verdict.accepted
    assert verdict.label_witness == (0, 1)


def test_not_a_preorder_errors():
    k = KripkeStructure(3, [], [["p"], ["p"], ["p"]])
    with pytest.raises(NotAPreorderError) as exc:
        check_preorder(k, {(0, 0), (1, 1)})
    assert exc.value.witness == (2, 2)
    with pytest.raises(NotAPreorderError) as exc:
        check_preorder(k, {(s, s) for s in range(3)} | {(0, 1), (1, 2)})
    assert exc.value.witness == (0, 2)


def test_out_of_range_pair():
    k = KripkeStructure(2, [], [["p"], ["p"]])
    with pytest.raises(ValidationError):
        check_preorder(k, {(0, 0), (1, 1), (0, 9)})
    with pytest.raises(ValidationError):
        find_definition_violation(k, {(0, 9)})


def test_definition_empty_relation_accepted(f2):
    assert check_definition(f2, set())


def test_definition_examples(f2):
    ident = {(s, s) for s in range(5)}
    # (3,0) needs (4,1) so the move 3 -> 4 can land on a related state
    assert not check_definition(f2, ident | {(3, 0)})
    assert check_definition(f2, ident | {(3, 0), (4, 1)})
    assert not check_definition(f2, ident | {(0, 3)})
    kind, x, y, z = find_definition_violation(f2, ident | {(0, 3)})
    assert kind == "move" and x == 0 and z == 3


def test_rejects_cycle_trapped_candidate():
    # 0 <-> 1 is a same-label cycle inside the candidate set of {2}; the
    # bottom-state shortcut alone would miss that 2 -> 3 is unmatched.
    k = KripkeStructure(4, [(0, 1), (1, 0), (2, 0), (2, 3)], [["p"], ["p"], ["p"], ["q"]])
    rel = {(s, s) for s in range(4)} | {(2, 0), (2, 1)}
    verdict = check_preorder(k, rel)
    assert not verdict.accepted
    b, c, state = verdict.refiner_witness
    assert set(b) == {2} and set(c) == {3} and state in (0, 1)
    assert not check_definition(k, rel)


@pytest.mark.parametrize("seed", range(120))
def test_agreement_with_definition_on_random_preorders(seed):
    rng = random.Random(seed)
    k = generate_random_ks(20_000 + seed, 2 + seed % 7, (0.1, 0.3, 0.5)[seed % 3], 1 + seed % 3)
    rel = random_preorder(rng, k)
    assert check_preorder(k, rel).accepted == check_definition(k, rel)


@pytest.mark.parametrize("seed", range(30))
def test_union_closure(seed):
    rng = random.Random(seed)
    k = generate_random_ks(21_000 + seed, 2 + seed % 7, 0.35, 1 + seed % 3)
    full = naive_stuttering_simulation(k)
    sample = lambda: largest_simulation_within(
        k, {p for p in full if rng.random() < 0.6}
    )
    r1, r2 = sample(), sample()
    assert check_definition(k, r1) and check_definition(k, r2)
    assert check_definition(k, r1 | r2)


@pytest.mark.parametrize("seed", range(30))
def test_maximality(seed):
    k = generate_random_ks(22_000 + seed, 2 + seed % 6, 0.35, 1 + seed % 3)
    best = naive_stuttering_simulation(k)
    assert check_definition(k, best)  # the oracle output is itself valid
    extras = [
        (x, y)
        for x in k.states()
        for y in k.states()
        if k.labels[x] == k.labels[y] and (x, y) not in best
    ]
    for pair in extras:
        augmented = transitive_closure(best | {pair})
        assert not check_definition(k, augmented)
        assert not check_preorder(k, augmented).accepted
