"""Structural preprocessing: inert-SCC collapse and list orderings.

The refinement engine requires a structure with no inert strongly
connected components, a state list that is topologically ordered inside
each label class, and a block list in reverse topological order of the
block preorder.  Everything here is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .model import KripkeStructure, ValidationError


@dataclass
class CollapseMap:
    """Mapping between original states and collapsed states."""

    representative: list[int]
    members: list[list[int]]

    @classmethod
    def identity(cls, n: int) -> "CollapseMap":
        return cls(list(range(n)), [[s] for s in range(n)])

    def is_identity(self) -> bool:
        return all(len(m) == 1 for m in self.members)


def _inert_sccs(k: KripkeStructure, block_of: Sequence[int]) -> list[list[int]]:
    """SCCs of the subgraph of transitions that stay inside one block.

    Iterative Tarjan; components are returned with sorted members, in a
    deterministic order.  A singleton with no inert self-loop is still
    reported (as its own trivial component).
    """
    n = k.num_states
    index = [-1] * n
    low = [0] * n
    on_stack = bytearray(n)
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = 1
            advanced = False
            succ = k.successors[v]
            while pi < len(succ):
                w = succ[pi]
                pi += 1
                if block_of[w] != block_of[v]:
                    continue
                if index[w] == -1:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = 0
                    comp.append(w)
                    if w == v:
                        break
                comp.sort()
                sccs.append(comp)
            if work:
                u, _ = work[-1]
                low[u] = min(low[u], low[v])
    return sccs


def collapse_inert_sccs(
    k: KripkeStructure, block_of: Sequence[int]
) -> tuple[KripkeStructure, CollapseMap]:
    """Collapse every SCC of inert transitions to a single state.

    A transition is inert when both endpoints share a block of
    ``block_of``.  Labels are inherited from the representative (least
    member); transitions are the existential lift with every resulting
    inert self-loop removed, so the output has no inert SCC at all.
    """
    sccs = _inert_sccs(k, block_of)
    sccs.sort(key=lambda c: c[0])
    representative = [0] * k.num_states
    members: list[list[int]] = []
    for new_id, comp in enumerate(sccs):
        members.append(comp)
        for s in comp:
            representative[s] = new_id
    edges: set[tuple[int, int]] = set()
    for s, t in k.transitions:
        a, b = representative[s], representative[t]
        if a == b:
            continue  # collapsed or plain inert self-loop
        edges.add((a, b))
    labels = [k.labels[comp[0]] for comp in sccs]
    collapsed = KripkeStructure(len(sccs), sorted(edges), labels)
    return collapsed, CollapseMap(representative, members)


def sort_states_locally_topological(
    k: KripkeStructure, label_classes: Sequence[Sequence[int]]
) -> list[int]:
    """Permutation of the states, contiguous per label class, such that
    no transition between same-label states goes backwards in the list.

    Only same-label edges constrain the order, so one Kahn pass over the
    inert subgraph followed by a stable grouping per class suffices.
    Raises ValidationError if an inert cycle remains (the structure was
    not collapsed first).
    """
    n = k.num_states
    class_of = [0] * n
    for ci, members in enumerate(label_classes):
        for s in members:
            class_of[s] = ci
    indeg = [0] * n
    for s, t in k.transitions:
        if class_of[s] == class_of[t]:
            indeg[t] += 1
    ready = [s for s in range(n) if indeg[s] == 0]
    topo: list[int] = []
    head = 0
    while head < len(ready):
        s = ready[head]
        head += 1
        topo.append(s)
        for t in k.successors[s]:
            if class_of[t] == class_of[s]:
                indeg[t] -= 1
                if indeg[t] == 0:
                    ready.append(t)
    if len(topo) != n:
        raise ValidationError("inert cycle detected; collapse SCCs first")
    grouped: list[list[int]] = [[] for _ in label_classes]
    for s in topo:
        grouped[class_of[s]].append(s)
    out: list[int] = []
    for members in grouped:
        out.extend(members)
    return out


def is_locally_topological(k: KripkeStructure, order: Sequence[int]) -> bool:
    """Predicate: no same-label transition goes backwards in ``order``."""
    pos = [0] * k.num_states
    for i, s in enumerate(order):
        pos[s] = i
    return all(
        pos[s] < pos[t]
        for s, t in k.transitions
        if k.labels[s] == k.labels[t]
    )


def sort_blocks_reverse_topological(
    block_ids: Sequence[int], related: Callable[[int, int], bool]
) -> list[int]:
    """Order blocks so a strictly related block follows its superiors.

    If ``b`` is related to ``c`` but not conversely, ``c`` precedes
    ``b``.  Mutually related groups stay together (ordered by id) and
    incomparable groups keep the input order of their least-index
    member, so the identity relation returns the input order unchanged.
    """
    ids = list(block_ids)
    index = {b: i for i, b in enumerate(ids)}
    # Mutual groups; with a preorder these are its equivalence classes.
    group_of: dict[int, int] = {}
    groups: list[list[int]] = []
    for b in ids:
        if b in group_of:
            continue
        grp = [b]
        group_of[b] = len(groups)
        for c in ids:
            if c != b and c not in group_of and related(b, c) and related(c, b):
                group_of[c] = len(groups)
                grp.append(c)
        groups.append(sorted(grp))
    succ_count = [0] * len(groups)
    preds: list[set[int]] = [set() for _ in groups]
    for b in ids:
        for c in ids:
            gb, gc = group_of[b], group_of[c]
            if gb != gc and related(b, c) and gc not in preds[gb]:
                # b below c: group gc must be emitted before gb
                preds[gb].add(gc)
    for gb in range(len(groups)):
        succ_count[gb] = len(preds[gb])
    emitted = [False] * len(groups)
    out: list[int] = []
    remaining = len(groups)
    dependants: list[list[int]] = [[] for _ in groups]
    for gb in range(len(groups)):
        for gc in preds[gb]:
            dependants[gc].append(gb)
    ready = sorted(
        (g for g in range(len(groups)) if succ_count[g] == 0),
        key=lambda g: index[groups[g][0]],
    )
    while ready:
        g = ready.pop(0)
        emitted[g] = True
        remaining -= 1
        out.extend(groups[g])
        fresh = []
        for gd in dependants[g]:
            succ_count[gd] -= 1
            if succ_count[gd] == 0:
                fresh.append(gd)
        if fresh:
            ready.extend(fresh)
            ready.sort(key=lambda g2: index[groups[g2][0]])
    if remaining:
        raise ValidationError("block relation is cyclic across mutual groups")
    return out


def is_reverse_topological(
    block_ids: Sequence[int], related: Callable[[int, int], bool]
) -> bool:
    """Predicate: no strictly related block precedes its superior."""
    for i, b in enumerate(block_ids):
        for c in block_ids[i + 1 :]:
            if related(b, c) and not related(c, b):
                return False
    return True
