"""Exact-cover search for (K4-e)-packings.

The complete solver is Algorithm X over edge columns: every allowed edge
must be covered by exactly one block, except for a fixed number of
``slack`` edges that may be left uncovered. It is used as an oracle for
nonexistence results and maximum-packing numbers, and (with randomised row
order and restarts) to produce small ingredients.
"""

from __future__ import annotations

import itertools
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import BudgetExceeded, Infeasible, Timeout
from .model import (
    Block,
    Design,
    HolePattern,
    LeaveClass,
    Pair,
    admissible_leaves,
    edge_count,
    leave_embeds,
    max_blocks,
    min_leave_size,
    pair,
    uniform_groups,
)
from .verify import verify_exact, verify_mgdp, verify_packing

DEFAULT_NODE_BUDGET = 10**8
DEFAULT_TIME_BUDGET = 600.0


# ---------------------------------------------------------------------------
# instances


@dataclass(frozen=True)
class Exact:
    """The leave is exactly this edge set."""

    edges: frozenset[Pair]


@dataclass(frozen=True)
class ByClass:
    """The leave is some copy of this class."""

    leave: LeaveClass


@dataclass(frozen=True)
class Free:
    """Any leave with the right number of edges."""


LeaveConstraint = Exact | ByClass | Free


@dataclass(frozen=True)
class PackingInstance:
    groups: tuple[tuple[int, ...], ...]
    count: int
    leave: LeaveConstraint = Free()
    holes: HolePattern = field(default_factory=HolePattern)
    descriptor: str = ""

    @classmethod
    def mgdp(cls, g: int, n: int, leave: LeaveConstraint | LeaveClass | None = None, count: int | None = None):
        if isinstance(leave, LeaveClass):
            leave = ByClass(leave)
        return cls(uniform_groups(g, n), max_blocks(g, n) if count is None else count, leave or Free(), descriptor=f"{g}^{n}")

    @classmethod
    def exact(cls, groups, holes: HolePattern | None = None, descriptor: str = ""):
        shell = Design.build(groups, (), holes)
        edges = len(shell.allowed_edges)
        if edges % 5:
            raise Infeasible(f"{edges} allowed edges is not a multiple of 5")
        return cls(shell.groups, edges // 5, Exact(frozenset()), shell.holes, descriptor or shell.descriptor)

    def shell(self) -> Design:
        return Design.build(self.groups, (), self.holes, self.descriptor)

    @property
    def slack(self) -> int:
        return len(self.shell().allowed_edges) - 5 * self.count

    def to_dict(self) -> dict:
        leave: dict
        if isinstance(self.leave, Exact):
            leave = {"exact": sorted(list(e) for e in self.leave.edges)}
        elif isinstance(self.leave, ByClass):
            leave = {"class": self.leave.leave.tag}
        else:
            leave = {"free": True}
        return {"type": self.descriptor, "groups": [list(G) for G in self.groups], "count": self.count, "leave": leave}


# ---------------------------------------------------------------------------
# candidate blocks


def neighbourhoods(n_points: int, allowed: Iterable[Pair]) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(n_points)]
    for u, v in allowed:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def candidate_blocks(n_points: int, allowed: Iterable[Pair], spines: Iterable[Pair] | None = None) -> list[Block]:
    """Every K4-e copy whose five edges are allowed.

    A copy is fixed by its spine ``ab`` (the edge joining the two degree-3
    vertices) and the unordered pair ``{c, d}`` drawn from the common
    neighbourhood of ``a`` and ``b``. ``spines`` restricts the spines tried.
    """
    allowed = set(allowed)
    adj = neighbourhoods(n_points, allowed)
    out = []
    for a, b in sorted(spines if spines is not None else allowed):
        common = sorted(adj[a] & adj[b])
        for c, d in itertools.combinations(common, 2):
            out.append(Block(a, b, c, d))
    return out


# ---------------------------------------------------------------------------
# Algorithm X


class ExactCover:
    """Algorithm X on dict-of-sets with minimum-remaining-values column choice.

    ``slack`` columns may be left uncovered (each such choice is a branch of
    its own). With ``rng`` set, rows within a column are tried in random
    order; otherwise in index order, which makes the search deterministic.
    """

    def __init__(
        self,
        n_columns: int,
        rows: Sequence[Sequence[int]],
        slack: int = 0,
        node_budget: int | None = DEFAULT_NODE_BUDGET,
        time_budget: float | None = None,
        rng: random.Random | None = None,
    ):
        self.rows = [tuple(r) for r in rows]
        self.X: dict[int, set[int]] = {c: set() for c in range(n_columns)}
        for i, r in enumerate(self.rows):
            for c in r:
                self.X[c].add(i)
        self.slack = slack
        self.node_budget = node_budget
        self.time_budget = time_budget
        self.rng = rng
        self.nodes = 0
        self._deadline = None
        self._extra = n_columns  # ids of virtual single-column rows

    def _select(self, cols: Sequence[int]) -> list[set[int]]:
        X, rows = self.X, self.rows
        removed = []
        for j in cols:
            for i in X[j]:
                for k in rows[i]:
                    if k != j:
                        X[k].discard(i)
            removed.append(X.pop(j))
        return removed

    def _deselect(self, cols: Sequence[int], removed: list[set[int]]) -> None:
        X, rows = self.X, self.rows
        for j in reversed(cols):
            X[j] = removed.pop()
            for i in X[j]:
                for k in rows[i]:
                    if k != j:
                        X[k].add(i)

    def solve(self) -> list[int] | None:
        """Row ids of one solution, or None when the tree is exhausted."""
        self.nodes = 0
        self._deadline = time.monotonic() + self.time_budget if self.time_budget else None
        chosen: list[int] = []
        # one frame per chosen row or skipped column, so depth <= len(X) + 1
        need = len(self.X) + 200
        if sys.getrecursionlimit() < need:
            sys.setrecursionlimit(need)
        return chosen if self._search(chosen, self.slack) else None

    def _tick(self) -> None:
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise BudgetExceeded(f"node budget {self.node_budget} exceeded", self.nodes)
        if self._deadline is not None and not self.nodes & 1023 and time.monotonic() > self._deadline:
            raise BudgetExceeded(f"time budget {self.time_budget}s exceeded", self.nodes)

    def _search(self, chosen: list[int], slack: int) -> bool:
        self._tick()
        X = self.X
        if not X:
            return True
        col = min(X, key=lambda c: len(X[c]))
        if not X[col] and not slack:
            return False
        options = sorted(X[col])
        if self.rng is not None:
            self.rng.shuffle(options)
        for r in options:
            chosen.append(r)
            cols = self.rows[r]
            removed = self._select(cols)
            if self._search(chosen, slack):
                return True
            self._deselect(cols, removed)
            chosen.pop()
        if slack:
            removed = self._select_uncovered(col)
            if self._search(chosen, slack - 1):
                return True
            self._deselect_uncovered(col, removed)
        return False

    def _select_uncovered(self, col: int) -> set[int]:
        X, rows = self.X, self.rows
        for i in X[col]:
            for k in rows[i]:
                if k != col:
                    X[k].discard(i)
        return X.pop(col)

    def _deselect_uncovered(self, col: int, removed: set[int]) -> None:
        X, rows = self.X, self.rows
        X[col] = removed
        for i in removed:
            for k in rows[i]:
                if k != col:
                    X[k].add(i)


@dataclass
class SearchResult:
    design: Design | None
    nodes: int


def _cover(
    shell: Design,
    leave: frozenset[Pair],
    slack: int,
    node_budget: int | None,
    time_budget: float | None,
    seed: int | None,
) -> SearchResult:
    cols = sorted(shell.allowed_edges - leave)
    index = {e: i for i, e in enumerate(cols)}
    blocks = [b for b in candidate_blocks(shell.n_points, cols)]
    rows = [tuple(index[e] for e in b.edges()) for b in blocks]
    rng = random.Random(seed) if seed is not None else None
    xc = ExactCover(len(cols), rows, slack, node_budget, time_budget, rng)
    sol = xc.solve()
    if sol is None:
        return SearchResult(None, xc.nodes)
    return SearchResult(shell.with_blocks(blocks[i] for i in sol), xc.nodes)


def solve_with_leave(
    inst: PackingInstance,
    leave: frozenset[Pair],
    node_budget: int | None = DEFAULT_NODE_BUDGET,
    time_budget: float | None = None,
    seed: int | None = None,
) -> SearchResult:
    """Cover every allowed edge outside ``leave`` exactly once."""
    shell = inst.shell()
    if not leave <= shell.allowed_edges:
        raise ValueError("leave edges must be allowed edges")
    if len(shell.allowed_edges) - len(leave) != 5 * inst.count:
        raise ValueError("leave size does not match the block count")
    return _cover(shell, frozenset(leave), 0, node_budget, time_budget, seed)


def solve_exact(
    inst: PackingInstance,
    node_budget: int | None = DEFAULT_NODE_BUDGET,
    time_budget: float | None = DEFAULT_TIME_BUDGET,
    seed: int | None = None,
) -> Design:
    """Find a packing meeting the instance, or raise Infeasible after exhausting the tree."""
    shell = inst.shell()
    slack = len(shell.allowed_edges) - 5 * inst.count
    if slack < 0:
        raise Infeasible("more blocks requested than edges allow")
    if isinstance(inst.leave, Exact):
        res = solve_with_leave(inst, inst.leave.edges, node_budget, time_budget, seed)
        design = res.design
    elif isinstance(inst.leave, ByClass):
        design = None
        spent = 0
        uniform = shell.uniform()
        if uniform is None or shell.holes.kind != "none":
            raise ValueError("class-constrained search needs a uniform layout without holes")
        for placement in leave_placements(*uniform, inst.leave.leave):
            res = solve_with_leave(
                inst, placement, None if node_budget is None else node_budget - spent, time_budget, seed
            )
            spent += res.nodes
            if res.design is not None:
                design = res.design
                break
    else:
        design = _cover(shell, frozenset(), slack, node_budget, time_budget, seed).design
    if design is None:
        raise Infeasible(f"no packing for {inst.descriptor or 'instance'}")
    verify_packing(design).raise_for("search result")
    return design


def search_random(
    inst: PackingInstance,
    seed: int = 1,
    restarts: int = 50,
    node_budget: int = 200_000,
) -> Design:
    """Randomised restarts of the exact solver; raises Timeout when all runs give up."""
    for k in range(restarts):
        try:
            return solve_exact(inst, node_budget, None, seed * 1_000_003 + k)
        except BudgetExceeded:
            continue
    raise Timeout(f"no design for {inst.descriptor} after {restarts} randomised runs")


# ---------------------------------------------------------------------------
# leave placements up to symmetry


def _set_partitions(items: list[int], adj: dict[int, set[int]], g: int, n: int):
    """Partitions of ``items`` into independent parts of size <= g, at most n parts."""
    parts: list[list[int]] = []

    def rec(i: int):
        if i == len(items):
            yield [list(p) for p in parts]
            return
        v = items[i]
        for p in parts:
            if len(p) < g and not (adj[v] & set(p)):
                p.append(v)
                yield from rec(i + 1)
                p.pop()
        if len(parts) < n:
            parts.append([v])
            yield from rec(i + 1)
            parts.pop()

    yield from rec(0)


def _automorphisms(leave: LeaveClass) -> list[dict[int, int]]:
    verts = sorted({v for e in leave.edges for v in e})
    edges = {pair(*e) for e in leave.edges}
    out = []
    for perm in itertools.permutations(verts):
        m = dict(zip(verts, perm))
        if {pair(m[u], m[v]) for u, v in edges} == edges:
            out.append(m)
    return out


def placement_orbits(g: int, n: int, leave: LeaveClass) -> list[list[list[int]]]:
    """Group-assignment patterns of the leave's vertices, one per symmetry orbit.

    Two embeddings of the leave in K_{n(g)} are equivalent under the
    automorphisms of K_{n(g)} exactly when the partitions they induce on the
    leave's vertices (by group) differ by an automorphism of the leave.
    """
    verts = sorted({v for e in leave.edges for v in e})
    adj = {v: set() for v in verts}
    for u, v in leave.edges:
        adj[u].add(v)
        adj[v].add(u)
    autos = _automorphisms(leave)
    seen: set = set()
    reps = []
    for parts in _set_partitions(verts, adj, g, n):
        key = frozenset(frozenset(p) for p in parts)
        if key in seen:
            continue
        for m in autos:
            seen.add(frozenset(frozenset(m[v] for v in p) for p in parts))
        reps.append(parts)
    return reps


def realize_placement(g: int, n: int, leave: LeaveClass, parts: list[list[int]]) -> frozenset[Pair]:
    """Edge set of the leave with part ``k`` placed in group ``k`` of the standard layout."""
    groups = uniform_groups(g, n)
    where = {}
    for k, p in enumerate(parts):
        for slot, v in enumerate(sorted(p)):
            where[v] = groups[k][slot]
    return frozenset(pair(where[u], where[v]) for u, v in leave.edges)


def leave_placements(g: int, n: int, leave: LeaveClass) -> list[frozenset[Pair]]:
    return [realize_placement(g, n, leave, p) for p in placement_orbits(g, n, leave)]


def all_placements(g: int, n: int, leave: LeaveClass) -> set[frozenset[Pair]]:
    """Every embedding of the leave in K_{n(g)} (no reduction); for small cross-checks."""
    verts = sorted({v for e in leave.edges for v in e})
    groups = uniform_groups(g, n)
    group_of = {v: i for i, G in enumerate(groups) for v in G}
    out = set()
    for image in itertools.permutations(range(g * n), len(verts)):
        m = dict(zip(verts, image))
        if all(group_of[m[u]] != group_of[m[v]] for u, v in leave.edges):
            out.add(frozenset(pair(m[u], m[v]) for u, v in leave.edges))
    return out


# ---------------------------------------------------------------------------
# nonexistence certificates


@dataclass
class OrbitRecord:
    placement: list[Pair]
    result: str  # "infeasible" | "found"
    nodes: int


@dataclass
class Certificate:
    g: int
    n: int
    leave: LeaveClass
    count: int
    orbits: list[OrbitRecord]
    conclusion: str  # "nonexistent" | "exists"
    witness: Design | None = None

    @property
    def nodes(self) -> int:
        return sum(o.nodes for o in self.orbits)

    def to_dict(self) -> dict:
        return {
            "instance": {"type": f"{self.g}^{self.n}", "leave": self.leave.tag, "blocks": self.count},
            "orbits": [{"placement": [list(e) for e in o.placement], "result": o.result, "nodes": o.nodes} for o in self.orbits],
            "conclusion": self.conclusion,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _orbit_job(args) -> tuple[str, int, dict | None]:
    g, n, placement, node_budget, time_budget = args
    inst = PackingInstance.mgdp(g, n, Exact(placement))
    res = solve_with_leave(inst, placement, node_budget, time_budget)
    if res.design is None:
        return "infeasible", res.nodes, None
    return "found", res.nodes, res.design.to_dict()


def prove_nonexistence(
    g: int,
    n: int,
    leave: LeaveClass,
    node_budget: int | None = DEFAULT_NODE_BUDGET,
    time_budget: float | None = DEFAULT_TIME_BUDGET,
    jobs: int = 1,
) -> Certificate:
    """Exhaust every leave placement (up to symmetry) for an MGDP of type g^n.

    The conclusion is ``nonexistent`` only when every orbit's search tree was
    fully explored; a budget overrun raises BudgetExceeded instead.
    """
    if leave.size != min_leave_size(g, n):
        raise ValueError(f"{leave.tag} has {leave.size} edges; type {g}^{n} needs {min_leave_size(g, n)}")
    count = max_blocks(g, n)
    if count * 5 + leave.size != edge_count(g, n):
        raise ValueError(f"{g}^{n} has a short maximum packing; certificates need the counting bound")
    placements = leave_placements(g, n, leave) if leave_embeds(leave, g, n) else []
    tasks = [(g, n, p, node_budget, time_budget) for p in placements]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_orbit_job, tasks))
    else:
        results = [_orbit_job(t) for t in tasks]
    records, witness = [], None
    for p, (status, nodes, found) in zip(placements, results):
        records.append(OrbitRecord(sorted(p), status, nodes))
        if found is not None and witness is None:
            witness = Design.from_dict(found)
    conclusion = "exists" if witness is not None else "nonexistent"
    if witness is not None:
        verify_mgdp(witness, leave).raise_for("search witness")
    return Certificate(g, n, leave, count, records, conclusion, witness)


# ---------------------------------------------------------------------------
# maximum packings


@dataclass
class MaxPacking:
    g: int
    n: int
    d: int
    classes: frozenset[LeaveClass]
    witnesses: dict[LeaveClass, Design]
    raw_witness: Design | None = None
    nodes: int = 0


def max_packing(
    g: int,
    n: int,
    node_budget: int | None = DEFAULT_NODE_BUDGET,
    time_budget: float | None = DEFAULT_TIME_BUDGET,
) -> MaxPacking:
    """D(g^n) and the minimum-size leave classes that occur, by exhaustive search."""
    total = edge_count(g, n)
    bound = total // 5
    size = total - 5 * bound
    achieved: dict[LeaveClass, Design] = {}
    nodes = 0
    for cls in LeaveClass.of_size(size):
        if not leave_embeds(cls, g, n):
            continue
        for placement in leave_placements(g, n, cls):
            inst = PackingInstance.mgdp(g, n, Exact(placement), count=bound)
            res = solve_with_leave(inst, placement, node_budget, time_budget)
            nodes += res.nodes
            if res.design is not None:
                achieved[cls] = res.design
                break
    if achieved:
        return MaxPacking(g, n, bound, frozenset(achieved), achieved, nodes=nodes)
    # nothing reaches the counting bound: walk down until a packing exists
    d = bound - 1
    while d >= 0:
        inst = PackingInstance.mgdp(g, n, Free(), count=d)
        res = _cover(inst.shell(), frozenset(), total - 5 * d, node_budget, time_budget, None)
        nodes += res.nodes
        if res.design is not None:
            return MaxPacking(g, n, d, frozenset(), {}, res.design, nodes)
        d -= 1
    raise AssertionError("the empty packing always exists")  # pragma: no cover


# ---------------------------------------------------------------------------
# orbit-reduced search


def orbit_search(
    shell: Design,
    perm: Sequence[int],
    node_budget: int | None = DEFAULT_NODE_BUDGET,
    time_budget: float | None = DEFAULT_TIME_BUDGET,
    seed: int | None = None,
) -> Design:
    """Exact design invariant under the cyclic group generated by ``perm``.

    Columns are edge orbits; rows are block orbits whose blocks are pairwise
    edge-disjoint. ``perm`` must be an automorphism of the layout.
    """
    for G in shell.groups:
        if len({shell.group_of[perm[v]] for v in G}) != 1:
            raise ValueError("permutation does not preserve the groups")
    if any(shell.hole_of[perm[v]] != shell.hole_of[v] and (shell.hole_of[v] >= 0) != (shell.hole_of[perm[v]] >= 0) for v in range(shell.n_points)):
        raise ValueError("permutation does not preserve the holes")
    edges = sorted(shell.allowed_edges)
    orbit_of: dict[Pair, int] = {}
    orbit_reps: list[Pair] = []
    for e in edges:
        if e in orbit_of:
            continue
        k = len(orbit_reps)
        orbit_reps.append(e)
        cur = e
        while cur not in orbit_of:
            orbit_of[cur] = k
            cur = pair(perm[cur[0]], perm[cur[1]])
    if set(orbit_of) != set(edges):
        raise ValueError("permutation does not preserve the allowed edges")
    rows: list[tuple[int, ...]] = []
    reps: list[Block] = []
    seen: set[Block] = set()
    for b in candidate_blocks(shell.n_points, edges, spines=orbit_reps):
        b = b.canonical()
        if b in seen:
            continue
        orbit = []
        cur = b
        while cur not in orbit:
            orbit.append(cur)
            cur = cur.relabel(perm)
        seen.update(orbit)
        covered = {e for x in orbit for e in x.edges()}
        if len(covered) != 5 * len(orbit):
            continue
        rows.append(tuple(sorted({orbit_of[e] for e in covered})))
        reps.append(b)
    rng = random.Random(seed) if seed is not None else None
    xc = ExactCover(len(orbit_reps), rows, 0, node_budget, time_budget, rng)
    sol = xc.solve()
    if sol is None:
        raise Infeasible(f"no {shell.descriptor} design invariant under the given permutation")
    blocks = []
    for i in sol:
        cur = reps[i]
        while True:
            blocks.append(cur)
            cur = cur.relabel(perm)
            if cur == reps[i]:
                break
    design = shell.with_blocks(blocks)
    verify_exact(design).raise_for("orbit search result")
    return design


# ---------------------------------------------------------------------------
# hill climbing


def hill_climb(
    inst: PackingInstance,
    seed: int = 1,
    max_steps: int = 2_000_000,
    time_budget: float | None = 120.0,
) -> Design:
    """Random insert/eject search; never claims infeasibility.

    Repeatedly picks an uncovered edge, inserts a random block through it and
    ejects every block sharing an edge with the newcomer. Stops once the
    uncovered edges number exactly the slack (or match an Exact leave).
    """
    shell = inst.shell()
    if isinstance(inst.leave, ByClass):
        raise ValueError("hill climbing needs an Exact or Free leave")
    fixed = inst.leave.edges if isinstance(inst.leave, Exact) else frozenset()
    cols = sorted(shell.allowed_edges - fixed)
    target = len(cols) - 5 * inst.count
    if target < 0:
        raise Infeasible("more blocks requested than edges allow")
    blocks = candidate_blocks(shell.n_points, cols)
    by_edge: dict[Pair, list[int]] = {e: [] for e in cols}
    for i, b in enumerate(blocks):
        for e in b.edges():
            by_edge[e].append(i)
    # states: ``owner`` maps a covered edge to its block id
    rng = random.Random(0x9E3779B1 ^ seed)
    owner: dict[Pair, int] = {}
    uncovered = list(cols)
    pos = {e: i for i, e in enumerate(uncovered)}
    chosen: set[int] = set()

    def cover(e: Pair, i: int):
        owner[e] = i
        j = pos.pop(e)
        last = uncovered.pop()
        if last != e:
            uncovered[j] = last
            pos[last] = j

    def uncover(e: Pair):
        del owner[e]
        pos[e] = len(uncovered)
        uncovered.append(e)

    deadline = time.monotonic() + time_budget if time_budget else None
    for step in range(max_steps):
        if len(uncovered) == target:
            break
        if deadline is not None and not step & 1023 and time.monotonic() > deadline:
            break
        e = uncovered[rng.randrange(len(uncovered))]
        i = rng.choice(by_edge[e])
        for f in blocks[i].edges():
            j = owner.get(f)
            if j is not None:
                chosen.discard(j)
                for h in blocks[j].edges():
                    uncover(h)
        chosen.add(i)
        for f in blocks[i].edges():
            cover(f, i)
    if len(uncovered) != target:
        raise Timeout(f"hill climbing left {len(uncovered)} edges uncovered (target {target})")
    design = shell.with_blocks(blocks[i] for i in chosen)
    verify_packing(design).raise_for("hill-climb result")
    return design
