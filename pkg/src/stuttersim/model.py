"""Core model: Kripke structures, partitions, block preorders, quotients.

States are dense integer ids in [0, num_states).  A label is a set of
atomic-proposition names; label equality is set equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class ValidationError(ValueError):
    """An input violates a documented precondition."""


class NotAPreorderError(ValidationError):
    """A relation that must be reflexive and transitive is not.

    ``witness`` is a pair showing the violation: ``(s, s)`` missing for
    reflexivity, or ``(s, u)`` missing while ``(s, t)`` and ``(t, u)``
    are present.
    """

    def __init__(self, message: str, witness: tuple[int, int]):
        super().__init__(f"{message} (witness pair {witness})")
        self.witness = witness


class KripkeStructure:
    """Finite transition system with a labeling of states by atom sets.

    The transition relation need not be total.  Instances are treated as
    immutable after construction; per-state predecessor lists are built
    once and shared by every algorithm.
    """

    def __init__(
        self,
        num_states: int,
        transitions: Iterable[tuple[int, int]],
        labels: Sequence[Iterable[str]],
    ):
        if num_states < 0:
            raise ValidationError("num_states must be >= 0")
        if len(labels) != num_states:
            raise ValidationError(
                f"expected {num_states} labels, got {len(labels)}"
            )
        self.num_states = num_states
        self.labels: tuple[frozenset[str], ...] = tuple(
            frozenset(lab) for lab in labels
        )
        seen: set[tuple[int, int]] = set()
        succ: list[list[int]] = [[] for _ in range(num_states)]
        pred: list[list[int]] = [[] for _ in range(num_states)]
        for s, t in transitions:
            if not (0 <= s < num_states and 0 <= t < num_states):
                raise ValidationError(f"transition ({s}, {t}) out of range")
            if (s, t) in seen:
                continue
            seen.add((s, t))
            succ[s].append(t)
            pred[t].append(s)
        for lst in succ:
            lst.sort()
        for lst in pred:
            lst.sort()
        self.successors: list[list[int]] = succ
        self.predecessors: list[list[int]] = pred
        self.transitions: list[tuple[int, int]] = sorted(seen)

    @property
    def atoms(self) -> frozenset[str]:
        out: set[str] = set()
        for lab in self.labels:
            out |= lab
        return frozenset(out)

    def states(self) -> range:
        return range(self.num_states)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KripkeStructure):
            return NotImplemented
        return (
            self.num_states == other.num_states
            and self.labels == other.labels
            and self.transitions == other.transitions
        )

    def __hash__(self):  # pragma: no cover - not used as dict key in hot paths
        return hash((self.num_states, self.labels, tuple(self.transitions)))

    def __repr__(self) -> str:
        return (
            f"KripkeStructure(states={self.num_states}, "
            f"transitions={len(self.transitions)})"
        )


def pre_image(k: KripkeStructure, targets: Iterable[int]) -> set[int]:
    """States with at least one transition into ``targets``."""
    out: set[int] = set()
    for t in targets:
        out.update(k.predecessors[t])
    return out


def bottom_states(k: KripkeStructure, subset: Iterable[int]) -> set[int]:
    """Members of ``subset`` with no transition back into ``subset``."""
    s = set(subset)
    return s - pre_image(k, s)


def labeling_partition(k: KripkeStructure) -> list[list[int]]:
    """Partition of the states into maximal same-label classes.

    Classes are ordered by least member, members ascending.
    """
    classes: dict[frozenset[str], list[int]] = {}
    for s in k.states():
        classes.setdefault(k.labels[s], []).append(s)
    return sorted(classes.values(), key=lambda c: c[0])


def block_exists_trans(
    k: KripkeStructure, src: Iterable[int], dst: Iterable[int]
) -> bool:
    """True iff some member of ``src`` has a transition into ``dst``."""
    dst_set = set(dst)
    return any(t in dst_set for s in src for t in k.successors[s])


def candidate_set(
    blocks: Sequence[Sequence[int]],
    leq: Iterable[tuple[int, int]] | set[tuple[int, int]],
    i: int,
) -> set[int]:
    """Union of all blocks that block ``i`` is related to.

    ``leq`` holds pairs of block indices; reflexive pairs must be
    included by the caller if intended.  For a state ``s`` in block
    ``i`` this is the current set of candidate simulators of ``s``.
    """
    pairs = leq if isinstance(leq, set) else set(leq)
    out: set[int] = set()
    for j in range(len(blocks)):
        if (i, j) in pairs:
            out.update(blocks[j])
    return out


def quotient(
    k: KripkeStructure, blocks: Sequence[Sequence[int]]
) -> KripkeStructure:
    """Existential lift of ``k`` to the given label-consistent partition.

    Quotient state ids follow the blocks sorted by least member.  There
    is an edge between distinct blocks iff some member steps into the
    other block, and a self-loop iff a block has an internal transition.
    """
    order = sorted(range(len(blocks)), key=lambda i: min(blocks[i]))
    block_of: dict[int, int] = {}
    labels: list[frozenset[str]] = []
    for q, i in enumerate(order):
        members = blocks[i]
        lab = k.labels[members[0]]
        for s in members:
            if k.labels[s] != lab:
                raise ValidationError(
                    f"block {sorted(members)} is not label-consistent"
                )
            if s in block_of:
                raise ValidationError(f"state {s} occurs in two blocks")
            block_of[s] = q
        labels.append(lab)
    if len(block_of) != k.num_states:
        raise ValidationError("blocks do not cover the state set")
    edges = {(block_of[s], block_of[t]) for s, t in k.transitions}
    return KripkeStructure(len(order), sorted(edges), labels)


@dataclass(frozen=True)
class RunStats:
    """Bookkeeping from one refinement run (post-collapse quantities)."""

    iterations: int
    blocks_created: int
    initial_blocks: int
    final_blocks: int


@dataclass
class SimulationResult:
    """Stuttering simulation preorder over the original states.

    ``blocks`` is the equivalence partition in canonical order (sorted
    by least member); ``preorder`` holds block-index pairs ``(i, j)``
    meaning every state of block ``j`` stuttering-simulates every state
    of block ``i``.  ``preorder`` is reflexive and transitive, and is
    antisymmetric on block indices.
    """

    blocks: list[list[int]]
    preorder: frozenset[tuple[int, int]]
    block_of: list[int]
    stats: RunStats | None = field(default=None, compare=False)

    def related(self, x: int, y: int) -> bool:
        """True iff ``y`` stuttering-simulates ``x``."""
        return (self.block_of[x], self.block_of[y]) in self.preorder

    def state_pairs(self) -> set[tuple[int, int]]:
        """The full state-level preorder as a set of pairs."""
        out: set[tuple[int, int]] = set()
        for i, j in self.preorder:
            for x in self.blocks[i]:
                for y in self.blocks[j]:
                    out.add((x, y))
        return out

    def strict_block_pairs(self) -> list[tuple[int, int]]:
        """Non-reflexive preorder pairs in lexicographic order."""
        return sorted(p for p in self.preorder if p[0] != p[1])
