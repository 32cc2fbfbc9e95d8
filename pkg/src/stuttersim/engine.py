"""Partition-refinement engine for the stuttering simulation preorder.

The engine maintains an ordered partition of a collapsed structure
together with a block preorder, counter tables and per-block bottom
bookkeeping, and refines them until no refiner block pair remains.  The
state list always satisfies the local topological property (no backward
same-label transition), blocks are contiguous ranges of it, and the
block list is kept in reverse topological order of the block preorder;
these orderings are what make the one-pass reachability computation and
the refiner search correct.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .model import (
    KripkeStructure,
    NotAPreorderError,
    RunStats,
    SimulationResult,
    ValidationError,
    labeling_partition,
)
from .preprocess import (
    collapse_inert_sccs,
    is_locally_topological,
    is_reverse_topological,
    sort_states_locally_topological,
)

CandidatePR = tuple[Sequence[Sequence[int]], Iterable[tuple[int, int]]]
TraceHook = Callable[[int, tuple[int, int], int, int], None]


@dataclass
class _Block:
    id: int
    begin: int
    end: int
    intersection: int | None = None
    local_bottoms: list[int] = field(default_factory=list)
    bottom_blocks: list[int] = field(default_factory=list)
    mark: bool = False


def _validate_candidate(
    k: KripkeStructure, blocks: Sequence[Sequence[int]], pairs: set[tuple[int, int]]
) -> None:
    seen = [False] * k.num_states
    for i, members in enumerate(blocks):
        if not members:
            raise ValidationError(f"block {i} is empty")
        lab = k.labels[members[0]]
        for s in members:
            if not 0 <= s < k.num_states:
                raise ValidationError(f"state {s} out of range in block {i}")
            if seen[s]:
                raise ValidationError(f"state {s} occurs in two blocks")
            seen[s] = True
            if k.labels[s] != lab:
                raise ValidationError(
                    f"block {i} mixes labels; offending block members "
                    f"{sorted(members)}"
                )
    if not all(seen):
        missing = seen.index(False)
        raise ValidationError(f"state {missing} belongs to no block")
    m = len(blocks)
    for i, j in pairs:
        if not (0 <= i < m and 0 <= j < m):
            raise ValidationError(f"relation pair ({i}, {j}) out of range")
    for i in range(m):
        if (i, i) not in pairs:
            raise NotAPreorderError("block relation is not reflexive", (i, i))
    for i, j in pairs:
        for w in range(m):
            if (j, w) in pairs and (i, w) not in pairs:
                raise NotAPreorderError(
                    "block relation is not transitive", (i, w)
                )
    for i, j in pairs:
        if i != j and k.labels[blocks[i][0]] != k.labels[blocks[j][0]]:
            raise ValidationError(
                f"related blocks differ in label; offending block "
                f"{sorted(blocks[i])}"
            )


def _combined_block_order(
    k: KripkeStructure,
    m: int,
    pairs: set[tuple[int, int]],
    block_of: Sequence[int],
) -> list[int]:
    """Block list order satisfying both ordering invariants at once.

    A block strictly below another must follow it (refiner search), and
    the source block of a same-label cross-block transition must precede
    the target block (one-pass reachability over the aligned state
    list).  Both families are necessary, so a constraint cycle means no
    valid configuration exists and the candidate relation is rejected.
    The default input induces no constraints and keeps the input order.
    """
    succs: list[set[int]] = [set() for _ in range(m)]  # emitted-before sets
    for i, j in pairs:
        if i != j and (j, i) not in pairs:
            succs[j].add(i)  # i strictly below j: j first
    for s, t in k.transitions:
        bs, bt = block_of[s], block_of[t]
        if bs != bt and k.labels[s] == k.labels[t]:
            succs[bs].add(bt)  # source block first
    indeg = [0] * m
    for b in range(m):
        for c in succs[b]:
            indeg[c] += 1
    ready = [b for b in range(m) if indeg[b] == 0]
    out: list[int] = []
    while ready:
        b = ready.pop(0)
        out.append(b)
        fresh = []
        for c in succs[b]:
            indeg[c] -= 1
            if indeg[c] == 0:
                fresh.append(c)
        if fresh:
            ready.extend(fresh)
            ready.sort()
    if len(out) != m:
        raise ValidationError(
            "candidate relation orders blocks against the same-label "
            "transition topology; no valid list ordering exists"
        )
    return out


class RefinementEngine:
    """Mutable refinement state over a collapsed Kripke structure.

    Construction performs the whole initialization: inert-SCC collapse,
    the two list orderings, and the counter tables.  ``run`` drives the
    main loop to the fixpoint and expands the answer back to the
    original states.

    ``candidate`` optionally supplies a coarser starting point as
    ``(blocks, block_pairs)``; the pairs must form a preorder whose
    related blocks agree on labels.  With a candidate the result is the
    largest stuttering simulation contained in the induced relation.
    """

    def __init__(
        self,
        k: KripkeStructure,
        candidate: CandidatePR | None = None,
        debug: bool = False,
    ):
        self.original = k
        self.debug = debug
        if candidate is None:
            blocks0: list[list[int]] = labeling_partition(k)
            pairs0 = {(i, i) for i in range(len(blocks0))}
        else:
            blocks0 = [list(b) for b in candidate[0]]
            pairs0 = set(candidate[1])
            _validate_candidate(k, blocks0, pairs0)

        block_of0 = [0] * k.num_states
        for i, members in enumerate(blocks0):
            for s in members:
                block_of0[s] = i
        self.k, self.collapse = collapse_inert_sccs(k, block_of0)
        n = self.k.num_states

        # Block ids 0..m-1 are the candidate block indices; identifiers
        # allocated later by splits are never reused.
        coll_members: list[list[int]] = []
        for members in blocks0:
            coll_members.append(sorted({self.collapse.representative[s] for s in members}))

        ts = sort_states_locally_topological(self.k, labeling_partition(self.k))
        tspos = [0] * n
        for i, s in enumerate(ts):
            tspos[s] = i

        m = len(blocks0)
        cblock_of = [0] * n
        for b, members in enumerate(coll_members):
            for s in members:
                cblock_of[s] = b
        self.order: list[int] = _combined_block_order(
            self.k, m, pairs0, cblock_of
        )

        cap = 1
        while cap < max(m, 1):
            cap *= 2
        self._cap = cap
        self.rel: list[bytearray] = [bytearray(cap) for _ in range(m)]
        for i, j in pairs0:
            self.rel[i][j] = 1
        self.count: list[list[int]] = [[0] * cap for _ in range(n)]
        self.bcount: list[list[int]] = [[0] * cap for _ in range(m)]
        self.mark1 = bytearray(n)
        self.mark2 = bytearray(n)

        self.state_list: list[int] = []
        self.position = [0] * n
        self.block_of = [0] * n
        self.blocks: list[_Block] = [_Block(b, 0, 0) for b in range(m)]
        for b in self.order:
            members = sorted(coll_members[b], key=lambda s: tspos[s])
            begin = len(self.state_list)
            for s in members:
                self.position[s] = len(self.state_list)
                self.block_of[s] = b
                self.state_list.append(s)
            self.blocks[b].begin = begin
            self.blocks[b].end = len(self.state_list)

        # Defensive: the combined block order above makes this impossible.
        for s, t in self.k.transitions:
            if self.k.labels[s] == self.k.labels[t] and self.position[s] > self.position[t]:
                raise AssertionError(
                    f"backward same-label transition ({s}, {t}) survived ordering"
                )

        self._init_counters()
        self.iterations = 0
        self.blocks_created = 0
        self.initial_blocks = m
        self._oracle_pairs: set[tuple[int, int]] | None = None
        # Containment oracle: the answer is the largest simulation inside
        # the *initial* relation, so capture that relation now.
        self._initial_pairs = self.current_state_pairs() if debug else None

    # -- table plumbing -----------------------------------------------------

    def members(self, b: int) -> list[int]:
        blk = self.blocks[b]
        return self.state_list[blk.begin : blk.end]

    def _grow_tables(self) -> None:
        extra = self._cap
        for row in self.rel:
            row.extend(bytearray(extra))
        for crow in self.count:
            crow.extend([0] * extra)
        for brow in self.bcount:
            brow.extend([0] * extra)
        self._cap *= 2

    def _new_block(self, begin: int, end: int) -> int:
        bid = len(self.blocks)
        if bid >= self._cap:
            self._grow_tables()
        self.rel.append(bytearray(self._cap))
        self.bcount.append([0] * self._cap)
        self.blocks.append(_Block(bid, begin, end))
        return bid

    def _init_counters(self) -> None:
        count, bcount, rel = self.count, self.bcount, self.rel
        bo = self.block_of
        for y in range(self.k.num_states):
            by = bo[y]
            for x in self.k.predecessors[y]:
                crow = count[x]
                for c in self.order:
                    if rel[c][by]:
                        crow[c] += 1
        for c in self.order:
            for x in range(self.k.num_states):
                bcount[bo[x]][c] += count[x][c]
        for b in self.order:
            blk = self.blocks[b]
            blk.local_bottoms = [x for x in self.members(b) if count[x][b] == 0]
            blk.bottom_blocks = [
                c
                for c in self.order
                if c != b
                and rel[b][c]
                and any(count[x][b] == 0 for x in self.members(c))
            ]

    # -- queries ------------------------------------------------------------

    def image(self, b: int) -> list[int]:
        """Members of every block above ``b``, in state-list order."""
        out: list[int] = []
        for c in self.order:
            if self.rel[b][c]:
                out.extend(self.members(c))
        return out

    def pos_ordered(self, s_list: Sequence[int], t_list: Sequence[int]) -> list[int]:
        """Members of ``s_list`` reaching ``t_list`` through ``s_list``.

        One backward scan; requires ``s_list`` to be a same-label
        sublist of the state list.  Seeds are the members of ``s_list``
        that already lie in ``t_list`` (the zero-length path) or step
        directly into it.  The result is a sublist of ``s_list``.
        """
        if self.debug:
            positions = [self.position[s] for s in s_list]
            assert positions == sorted(positions), "source is not a state-list sublist"
            assert len({self.k.labels[s] for s in s_list}) <= 1, "source mixes labels"
        m1, m2 = self.mark1, self.mark2
        pred = self.k.predecessors
        touched: list[int] = []
        for s in s_list:
            m1[s] = 1
        for t in t_list:
            if m1[t] and not m2[t]:
                m2[t] = 1
                touched.append(t)
            for x in pred[t]:
                if m1[x] and not m2[x]:
                    m2[x] = 1
                    touched.append(x)
        for y in reversed(s_list):
            if m2[y]:
                for x in pred[y]:
                    if m1[x] and not m2[x]:
                        m2[x] = 1
                        touched.append(x)
        result = [s for s in s_list if m2[s]]
        for s in s_list:
            m1[s] = 0
        for s in touched:
            m2[s] = 0
        if self.debug:
            from .reference import pos_naive

            assert set(result) == pos_naive(self.k, s_list, t_list), (
                "ordered reachability disagrees with naive computation"
            )
        return result

    def find_refiner(self) -> tuple[int, int] | None:
        """First block pair (B, C) whose candidate sets still need work.

        Scans target blocks in list order and, per target, predecessor
        blocks in list order; the reverse topological block order
        guarantees that every pair above the current one was already
        cleared, which is what makes the two bottom-state conditions a
        complete characterization.  Pairs cleared once are skipped via a
        local matrix, including everything below a cleared target.
        """
        rel, count, bcount = self.rel, self.count, self.bcount
        bo = self.block_of
        not_refiner: set[tuple[int, int]] = set()
        for c in self.order:
            marked: list[int] = []
            for y in self.members(c):
                for x in self.k.predecessors[y]:
                    blk = self.blocks[bo[x]]
                    if not blk.mark:
                        blk.mark = True
                        marked.append(blk.id)
            if not marked:
                continue
            try:
                for b in self.order:
                    if not self.blocks[b].mark or (b, c) in not_refiner:
                        continue
                    if not rel[c][b]:
                        for s in self.blocks[b].local_bottoms:
                            if count[s][c] == 0:
                                return (b, c)
                    for d in self.blocks[b].bottom_blocks:
                        if not rel[c][d] and bcount[d][c] == 0:
                            return (b, c)
                    for e in self.order:
                        if rel[e][c]:
                            not_refiner.add((b, e))
            finally:
                for bid in marked:
                    self.blocks[bid].mark = False
        return None

    # -- refinement steps ---------------------------------------------------

    def split(self, s_list: Sequence[int]) -> list[int]:
        """Split the partition w.r.t. a splitter sublist of the state list.

        Each properly split parent keeps its id for the part outside the
        splitter and points to a fresh block holding the inside part,
        inserted immediately in front of it; within both parts states
        keep their previous relative order, which preserves the local
        topological property.  Returns the properly split parent ids.
        """
        bo = self.block_of
        parents: list[int] = []
        inside: dict[int, list[int]] = {}
        for x in s_list:
            b = bo[x]
            grp = inside.get(b)
            if grp is None:
                inside[b] = grp = []
                parents.append(b)
            grp.append(x)
        split_ids: list[int] = []
        for p in parents:
            blk = self.blocks[p]
            ss = inside[p]
            if len(ss) == blk.end - blk.begin:
                continue  # whole block inside the splitter: no split
            in_s = set(ss)
            ds = [x for x in self.state_list[blk.begin : blk.end] if x not in in_s]
            nid = self._new_block(blk.begin, blk.begin + len(ss))
            blk.intersection = nid
            newseq = ss + ds
            self.state_list[blk.begin : blk.end] = newseq
            for i, x in enumerate(newseq, start=blk.begin):
                self.position[x] = i
            for x in ss:
                bo[x] = nid
            blk.begin += len(ss)
            self.order.insert(self.order.index(p), nid)
            split_ids.append(p)
        return split_ids

    def splitting_procedure(self, s_list: Sequence[int]) -> None:
        """Split w.r.t. ``s_list`` and duplicate relation rows/columns so
        that every state's candidate set is unchanged, then repair the
        counter tables and bottom bookkeeping."""
        pre_order = list(self.order)
        split_ids = self.split(s_list)
        if not split_ids:
            return
        for p in split_ids:
            i = self.blocks[p].intersection
            ri, rp = self.rel[i], self.rel[p]
            for c in pre_order:
                ri[c] = rp[c]
        for p in split_ids:
            i = self.blocks[p].intersection
            for c in self.order:
                self.rel[c][i] = self.rel[c][p]
        self.update(split_ids)
        for p in split_ids:
            self.blocks[p].intersection = None
        self.blocks_created += 2 * len(split_ids)

    def update(self, split_ids: Sequence[int]) -> None:
        """Rebuild Count/BCount rows and the bottom bookkeeping after a
        split.  Candidate sets are unchanged at this point, so the new
        block's per-state counters are copies of its parent's and the
        parent's block counters redistribute between the two parts."""
        if not split_ids:
            return
        n = self.k.num_states
        pairs = [(p, self.blocks[p].intersection) for p in split_ids]
        count, bcount = self.count, self.bcount
        for p, i in pairs:
            for x in range(n):
                count[x][i] = count[x][p]
        new_ids = {i for _, i in pairs}
        old_rows = [b for b in self.order if b not in new_ids]
        for p, i in pairs:
            for r in old_rows:
                bcount[r][i] = bcount[r][p]
        for p, i in pairs:
            bi, bp = bcount[i], bcount[p]
            for c in self.order:
                bi[c] = bp[c]
        for p, i in pairs:
            bi, bp = bcount[i], bcount[p]
            part = self.members(p)
            for c in self.order:
                d = 0
                for x in part:
                    d += count[x][c]
                bp[c] = d
                bi[c] -= d
        # Bottom states of the (unchanged) candidate set merely
        # redistribute between the two parts.
        bo = self.block_of
        for p, i in pairs:
            old = self.blocks[p].local_bottoms
            self.blocks[p].local_bottoms = [x for x in old if bo[x] == p]
            self.blocks[i].local_bottoms = [x for x in old if bo[x] == i]
        # Bottom-block lists: new halves inherit the parent's list, every
        # split entry is replaced by whichever parts still hold a bottom
        # state, and the sibling halves are cross-linked when they hold
        # bottom states themselves (the halves are mutually related
        # until the upcoming relation pruning).
        for p, i in pairs:
            self.blocks[i].bottom_blocks = list(self.blocks[p].bottom_blocks)
        for b in self.order:
            blk = self.blocks[b]
            if not blk.bottom_blocks:
                continue
            repaired: list[int] = []
            for c in blk.bottom_blocks:
                ci = self.blocks[c].intersection
                if ci is None:
                    repaired.append(c)
                    continue
                if any(count[x][b] == 0 for x in self.members(c)):
                    repaired.append(c)
                if any(count[x][b] == 0 for x in self.members(ci)):
                    repaired.append(ci)
            blk.bottom_blocks = repaired
        for p, i in pairs:
            if self.blocks[i].local_bottoms:
                self.blocks[p].bottom_blocks.append(i)
            if self.blocks[p].local_bottoms:
                self.blocks[i].bottom_blocks.append(p)

    def refine(self, s_list: Sequence[int]) -> None:
        """Prune the relation against a splitter that is now a union of
        blocks: a block inside the splitter keeps only its in-splitter
        superiors.  Counters are decremented per removed transition
        target, and states whose counter hits zero are recorded as new
        bottom states (in their own block's list when they sit in the
        pruned block itself, otherwise in its bottom-block list)."""
        bo = self.block_of
        splitter_blocks: list[int] = []
        for x in s_list:
            blk = self.blocks[bo[x]]
            if not blk.mark:
                blk.mark = True
                splitter_blocks.append(blk.id)
        count, bcount = self.count, self.bcount
        pred = self.k.predecessors
        for b in splitter_blocks:
            row = self.rel[b]
            blk_b = self.blocks[b]
            for c in self.order:
                if not row[c] or self.blocks[c].mark:
                    continue
                row[c] = 0
                removed = self.members(c)
                for y in removed:
                    for x in pred[y]:
                        count[x][b] -= 1
                        bcount[bo[x]][b] -= 1
                bb = blk_b.bottom_blocks
                if c in bb:
                    bb.remove(c)
                for y in removed:
                    for x in pred[y]:
                        if count[x][b]:
                            continue
                        bx = bo[x]
                        if bx == b:
                            if x not in blk_b.local_bottoms:
                                blk_b.local_bottoms.append(x)
                        elif row[bx] and bx not in bb:
                            bb.append(bx)
        for b in splitter_blocks:
            self.blocks[b].mark = False

    # -- main loop ----------------------------------------------------------

    def run(self, trace: TraceHook | None = None) -> SimulationResult:
        """Refine to the fixpoint and expand back to the original states."""
        if self.debug:
            self.check_invariants()
        while True:
            found = self.find_refiner()
            if found is None:
                break
            b, c = found
            if self.debug:
                self._check_refiner(b, c)
            src = self.image(b)
            dst = self.image(c)
            splitter = self.pos_ordered(src, dst)
            self.splitting_procedure(splitter)
            self.refine(splitter)
            self.iterations += 1
            if trace is not None:
                trace(self.iterations, (b, c), len(splitter), len(self.order))
            if self.debug:
                self.check_invariants()
        return self._build_result()

    def _build_result(self) -> SimulationResult:
        rel = self.rel
        # Mutually related distinct blocks (possible only for candidate
        # inputs) denote equivalent states: merge them into one class.
        group_of: dict[int, int] = {}
        groups: list[list[int]] = []
        for b in self.order:
            if b in group_of:
                continue
            grp = [b]
            group_of[b] = len(groups)
            for c in self.order:
                if c != b and c not in group_of and rel[b][c] and rel[c][b]:
                    group_of[c] = len(groups)
                    grp.append(c)
            groups.append(grp)
        expanded: list[list[int]] = []
        for grp in groups:
            orig: list[int] = []
            for b in grp:
                for s in self.members(b):
                    orig.extend(self.collapse.members[s])
            expanded.append(sorted(orig))
        canon = sorted(range(len(groups)), key=lambda g: expanded[g][0])
        rank = {g: i for i, g in enumerate(canon)}
        blocks = [expanded[g] for g in canon]
        preorder = set()
        for gi, grp in enumerate(groups):
            for gj in range(len(groups)):
                if rel[grp[0]][groups[gj][0]]:
                    preorder.add((rank[gi], rank[gj]))
        block_of = [0] * self.original.num_states
        for i, members in enumerate(blocks):
            for s in members:
                block_of[s] = i
        stats = RunStats(
            iterations=self.iterations,
            blocks_created=self.blocks_created,
            initial_blocks=self.initial_blocks,
            final_blocks=len(self.order),
        )
        return SimulationResult(blocks, frozenset(preorder), block_of, stats)

    # -- debug invariants ---------------------------------------------------

    def _check_refiner(self, b: int, c: int) -> None:
        """A returned pair must have an existential transition and leave
        some bottom state of b's candidate set unable to take the step
        (the brute-force form of the characterization)."""
        mu_c = set(self.image(c))
        assert any(
            self.block_of[y] == c for x in self.members(b) for y in self.k.successors[x]
        ), "refiner pair lacks an existential transition"
        mu_b = set(self.image(b))
        bottoms = {
            x for x in mu_b if not any(y in mu_b for y in self.k.successors[x])
        }
        reachable = mu_c | {
            x
            for x in range(self.k.num_states)
            if any(y in mu_c for y in self.k.successors[x])
        }
        assert not bottoms <= reachable, (
            "returned pair contradicts the bottom-state characterization"
        )

    def current_state_pairs(self) -> set[tuple[int, int]]:
        """Relation currently encoded by the partition-relation pair,
        over collapsed states."""
        out = set()
        bo = self.block_of
        for s in range(self.k.num_states):
            for t in range(self.k.num_states):
                if self.rel[bo[s]][bo[t]]:
                    out.add((s, t))
        return out

    def check_invariants(self) -> None:
        """Assert every boundary invariant against brute-force values."""
        n = self.k.num_states
        rel, count, bcount = self.rel, self.count, self.bcount
        order = self.order
        assert not any(self.mark1) and not any(self.mark2), "state marks leaked"
        pos = 0
        for b in order:
            blk = self.blocks[b]
            assert not blk.mark, "block mark leaked"
            assert blk.intersection is None, "intersection field leaked"
            assert blk.begin == pos and blk.end > blk.begin, "blocks misaligned"
            pos = blk.end
            for x in self.members(b):
                assert self.block_of[x] == b and self.position[x] >= blk.begin
        assert pos == n, "blocks do not cover the state list"
        for b in order:
            assert rel[b][b], "relation lost reflexivity"
            for c in order:
                if not rel[b][c]:
                    continue
                if b != c:
                    assert (
                        self.k.labels[self.members(b)[0]]
                        == self.k.labels[self.members(c)[0]]
                    ), "related blocks differ in label"
                for d in order:
                    if rel[c][d]:
                        assert rel[b][d], "relation lost transitivity"
        assert is_locally_topological(self.k, self.state_list), "state order broken"
        assert is_reverse_topological(order, lambda b, c: bool(rel[b][c])), (
            "block order broken"
        )
        mu: dict[int, set[int]] = {}
        for b in order:
            mu[b] = set()
            for c in order:
                if rel[b][c]:
                    mu[b].update(self.members(c))
        bo = self.block_of
        for x in range(n):
            for c in order:
                expected = sum(1 for y in self.k.successors[x] if rel[c][bo[y]])
                assert count[x][c] == expected, f"Count({x},{c}) drifted"
        for b in order:
            for c in order:
                expected = sum(count[x][c] for x in self.members(b))
                assert bcount[b][c] == expected, f"BCount({b},{c}) drifted"
        for b in order:
            blk = self.blocks[b]
            expect_lb = {
                x for x in self.members(b) if not any(y in mu[b] for y in self.k.successors[x])
            }
            assert set(blk.local_bottoms) == expect_lb, f"localBottoms({b}) drifted"
            bottoms = {
                x for x in mu[b] if not any(y in mu[b] for y in self.k.successors[x])
            }
            expect_bb = {
                c
                for c in order
                if c != b and rel[b][c] and any(x in bottoms for x in self.members(c))
            }
            assert set(blk.bottom_blocks) == expect_bb, f"bottomBlocks({b}) drifted"
        if self._oracle_pairs is None:
            from .reference import largest_simulation_within

            assert self._initial_pairs is not None
            self._oracle_pairs = largest_simulation_within(self.k, self._initial_pairs)
        for s, t in self._oracle_pairs:
            assert rel[bo[s]][bo[t]], (
                f"pair ({s},{t}) of the answer fell out of the relation"
            )


def compute_preorder(
    k: KripkeStructure,
    candidate: CandidatePR | None = None,
    *,
    debug: bool = False,
    trace: TraceHook | None = None,
) -> SimulationResult:
    """Compute the stuttering simulation preorder and equivalence of ``k``.

    Without a candidate the result is the full preorder: ``blocks`` are
    the stuttering simulation equivalence classes and ``preorder`` the
    block-level simulation order.  ``debug`` enables exhaustive
    invariant checking at every main-loop boundary.
    """
    return RefinementEngine(k, candidate, debug=debug).run(trace)
