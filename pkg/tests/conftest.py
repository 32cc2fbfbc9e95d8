import random

import pytest

from stuttersim import KripkeStructure


@pytest.fixture
def f1() -> KripkeStructure:
    """Stutter chain: three p-states feeding two q-states."""
    return KripkeStructure(
        5, [(0, 3), (1, 2), (2, 4)], [["p"], ["p"], ["p"], ["q"], ["q"]]
    )


@pytest.fixture
def f2() -> KripkeStructure:
    """Asymmetric: 0 has an extra r-move that 3 cannot match."""
    return KripkeStructure(
        5, [(0, 1), (0, 2), (3, 4)], [["p"], ["q"], ["r"], ["p"], ["q"]]
    )


def pairs_of(sim: dict[int, set[int]]) -> set[tuple[int, int]]:
    """State relation induced by a simulator-set map."""
    return {(x, y) for x, ys in sim.items() for y in ys}


def random_preorder(rng: random.Random, k: KripkeStructure) -> set[tuple[int, int]]:
    """Reflexive-transitive closure of a random set of same-label pairs."""
    n = k.num_states
    pairs = {(s, s) for s in range(n)}
    candidates = [
        (s, t)
        for s in range(n)
        for t in range(n)
        if s != t and k.labels[s] == k.labels[t]
    ]
    rng.shuffle(candidates)
    for pair in candidates[: rng.randrange(0, len(candidates) + 1)]:
        pairs.add(pair)
    return transitive_closure(pairs)


def transitive_closure(pairs: set[tuple[int, int]]) -> set[tuple[int, int]]:
    closed = set(pairs)
    changed = True
    while changed:
        changed = False
        fwd: dict[int, set[int]] = {}
        for a, b in closed:
            fwd.setdefault(a, set()).add(b)
        for a, b in list(closed):
            for c in fwd.get(b, ()):
                if (a, c) not in closed:
                    closed.add((a, c))
                    changed = True
    return closed
