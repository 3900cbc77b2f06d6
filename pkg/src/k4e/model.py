"""Core value types: blocks, group layouts, holes, leaves and development rules.

A block ``[a, b, c-d]`` is a copy of K4-e whose degree-3 vertices are ``a``
and ``b`` and whose non-adjacent pair is ``c, d``. Vertices are dense
integers ``0..N-1``.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import DuplicateBlock, InvalidBlock, NonIntegral, UnclassifiableLeave

Pair = tuple[int, int]

JSON_VERSION = 1


def pair(u: int, v: int) -> Pair:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, order=True)
class Block:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if len({self.a, self.b, self.c, self.d}) != 4:
            raise InvalidBlock(f"block vertices must be distinct: {self.as_list()}")

    @classmethod
    def of(cls, row: Sequence[int]) -> Block:
        a, b, c, d = row
        return cls(a, b, c, d).canonical()

    def canonical(self) -> Block:
        a, b = (self.a, self.b) if self.a < self.b else (self.b, self.a)
        c, d = (self.c, self.d) if self.c < self.d else (self.d, self.c)
        if (a, b, c, d) == (self.a, self.b, self.c, self.d):
            return self
        return Block(a, b, c, d)

    def edges(self) -> tuple[Pair, ...]:
        a, b, c, d = self.a, self.b, self.c, self.d
        return (pair(a, b), pair(a, c), pair(a, d), pair(b, c), pair(b, d))

    @property
    def vertices(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def relabel(self, mapping: Sequence[int] | Mapping[int, int]) -> Block:
        return Block(mapping[self.a], mapping[self.b], mapping[self.c], mapping[self.d]).canonical()

    def as_list(self) -> list[int]:
        return [self.a, self.b, self.c, self.d]

    def __str__(self) -> str:
        return f"[{self.a}, {self.b}, {self.c} - {self.d}]"


def block_edges(b: Block) -> frozenset[Pair]:
    return frozenset(b.edges())


# ---------------------------------------------------------------------------
# leave classes


def degree_signature(edges: Iterable[Pair]) -> tuple[tuple[int, ...], ...]:
    """Multiset of per-component sorted degree sequences (isolated vertices ignored)."""
    edges = [pair(*e) for e in edges]
    adj: dict[int, set[int]] = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    seen: set[int] = set()
    comps = []
    for start in sorted(adj):
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(tuple(sorted(len(adj[x]) for x in comp)))
    return tuple(sorted(comps))


_CANONICAL_LEAVES: dict[str, tuple[Pair, ...]] = {
    "E0": (),
    "E1": ((0, 1),),
    "E2_1": ((0, 1), (1, 2)),
    "E2_2": ((0, 1), (2, 3)),
    "E3_1": ((0, 1), (0, 2), (1, 2)),
    "E3_2": ((0, 1), (0, 2), (0, 3)),
    "E3_3": ((0, 1), (1, 2), (2, 3)),
    "E3_4": ((0, 1), (1, 2), (3, 4)),
    "E3_5": ((0, 1), (2, 3), (4, 5)),
    "E4_1": ((0, 1), (0, 2), (1, 2), (0, 3)),
    "E4_2": ((0, 1), (1, 2), (2, 3), (0, 3)),
    "E4_3": ((0, 1), (1, 2), (2, 3), (3, 4)),
    "E4_4": ((0, 1), (1, 2), (2, 3), (2, 4)),
    "E4_5": ((0, 1), (0, 2), (0, 3), (0, 4)),
    "E4_6": ((0, 1), (0, 2), (1, 2), (3, 4)),
    "E4_7": ((0, 1), (0, 2), (0, 3), (4, 5)),
    "E4_8": ((0, 1), (1, 2), (3, 4), (4, 5)),
    "E4_9": ((0, 1), (1, 2), (2, 3), (4, 5)),
    "E4_10": ((0, 1), (1, 2), (3, 4), (5, 6)),
    "E4_11": ((0, 1), (2, 3), (4, 5), (6, 7)),
}


class LeaveClass(enum.Enum):
    E0 = "E0"
    E1 = "E1"
    E2_1 = "E2_1"
    E2_2 = "E2_2"
    E3_1 = "E3_1"
    E3_2 = "E3_2"
    E3_3 = "E3_3"
    E3_4 = "E3_4"
    E3_5 = "E3_5"
    E4_1 = "E4_1"
    E4_2 = "E4_2"
    E4_3 = "E4_3"
    E4_4 = "E4_4"
    E4_5 = "E4_5"
    E4_6 = "E4_6"
    E4_7 = "E4_7"
    E4_8 = "E4_8"
    E4_9 = "E4_9"
    E4_10 = "E4_10"
    E4_11 = "E4_11"

    @property
    def tag(self) -> str:
        return self.value

    @property
    def edges(self) -> tuple[Pair, ...]:
        return _CANONICAL_LEAVES[self.value]

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def n_vertices(self) -> int:
        return len({v for e in self.edges for v in e})

    @property
    def signature(self) -> tuple[tuple[int, ...], ...]:
        return _SIGNATURES[self]

    @property
    def paper_name(self) -> str:
        if self is LeaveClass.E0:
            return "\\emptyset"
        if self is LeaveClass.E1:
            return "E_{1}"
        i, j = self.value[1:].split("_")
        return f"E_{{{i},{j}}}"

    @classmethod
    def parse(cls, tag: str) -> LeaveClass:
        tag = tag.strip().replace(",", "_").replace("{", "").replace("}", "")
        if tag in ("E_0", "0", "empty", "EMPTY", "E"):
            tag = "E0"
        tag = tag.replace("E_", "E")
        try:
            return cls(tag)
        except ValueError:
            raise ValueError(f"unknown leave tag {tag!r}") from None

    @classmethod
    def of_size(cls, size: int) -> list[LeaveClass]:
        return [c for c in cls if c.size == size]

    def __str__(self) -> str:
        return self.value


_SIGNATURES = {c: degree_signature(c.edges) for c in LeaveClass}
_BY_SIGNATURE = {sig: c for c, sig in _SIGNATURES.items()}
assert len(_BY_SIGNATURE) == len(LeaveClass), "leave signatures must be distinct"


def classify_leave(edges: Iterable[Pair]) -> LeaveClass:
    edges = {pair(*e) for e in edges}
    if any(u == v for u, v in edges):
        raise UnclassifiableLeave("loops are not allowed in a leave")
    if len(edges) > 4:
        raise UnclassifiableLeave(f"leave has {len(edges)} edges; only <= 4 are classified")
    sig = degree_signature(edges)
    try:
        return _BY_SIGNATURE[sig]
    except KeyError:  # pragma: no cover - every graph with <= 4 edges has a class
        raise AssertionError(f"no leave class for signature {sig}") from None


# ---------------------------------------------------------------------------
# admissibility arithmetic

# (g, n) pairs whose leave sets deviate from the plain minimum-size rule
EXCEPTIONAL_PAIRS = frozenset({(1, 5), (1, 7), (1, 8), (1, 9), (2, 3), (2, 4), (3, 3), (4, 3)})
# pairs where D falls one short of the counting bound
SHORT_PAIRS = frozenset({(1, 5), (1, 7), (1, 9)})

_RESTRICTED = {
    (2, 3): {LeaveClass.E2_2},
    (3, 3): {LeaveClass.E2_2},
    (4, 3): {LeaveClass.E3_1},
    (2, 4): {LeaveClass(f"E4_{j}") for j in range(2, 12)},
    (1, 8): {LeaveClass.E3_3, LeaveClass.E3_4, LeaveClass.E3_5},
}


def edge_count(g: int, n: int) -> int:
    """Number of edges of the complete multipartite graph K_{n(g)}."""
    return n * (n - 1) * g * g // 2


def min_leave_size(g: int, n: int) -> int:
    if n < 3 or g < 1:
        raise ValueError("need n >= 3 and g >= 1")
    e = edge_count(g, n)
    return e - 5 * (e // 5)


def max_blocks(g: int, n: int) -> int:
    """D(g^n): the maximum number of blocks in a packing of K_{n(g)}."""
    bound = edge_count(g, n) // 5
    return bound - 1 if (g, n) in SHORT_PAIRS else bound


def leave_embeds(leave: LeaveClass, g: int, n: int) -> bool:
    """True iff the leave graph is a subgraph of K_{n(g)}.

    Needs a proper colouring of the leave with at most ``n`` colours, each
    colour class holding at most ``g`` vertices.
    """
    verts = sorted({v for e in leave.edges for v in e})
    if len(verts) > g * n:
        return False
    adj = {v: set() for v in verts}
    for u, v in leave.edges:
        adj[u].add(v)
        adj[v].add(u)
    colour: dict[int, int] = {}
    load = Counter()

    def place(i: int) -> bool:
        if i == len(verts):
            return True
        v = verts[i]
        used = max(colour.values(), default=-1)
        for c in range(min(n, used + 2)):
            if load[c] >= g or any(colour.get(u) == c for u in adj[v]):
                continue
            colour[v] = c
            load[c] += 1
            if place(i + 1):
                return True
            load[c] -= 1
            del colour[v]
        return False

    return place(0)


class LeaveSet(frozenset):
    """Frozenset of leave classes carrying an ``exceptional`` flag.

    ``exceptional`` marks the pairs where no leave of the minimum size exists
    and the maximum packing has one block fewer than the counting bound.
    """

    exceptional: bool

    def __new__(cls, items=(), exceptional: bool = False):
        obj = super().__new__(cls, items)
        obj.exceptional = exceptional
        return obj

    def __repr__(self) -> str:
        inner = ", ".join(sorted((c.tag for c in self), key=_tag_key))
        flag = ", exceptional" if self.exceptional else ""
        return f"LeaveSet({{{inner}}}{flag})"


def _tag_key(tag: str):
    return tuple(int(x) for x in tag[1:].split("_"))


def sort_classes(classes: Iterable[LeaveClass]) -> list[LeaveClass]:
    return sorted(classes, key=lambda c: _tag_key(c.tag))


def admissible_leaves(g: int, n: int) -> LeaveSet:
    if (g, n) in SHORT_PAIRS:
        return LeaveSet((), exceptional=True)
    size = min_leave_size(g, n)
    classes = {c for c in LeaveClass.of_size(size) if leave_embeds(c, g, n)}
    if (g, n) in _RESTRICTED:
        classes &= _RESTRICTED[(g, n)]
    return LeaveSet(classes)


# ---------------------------------------------------------------------------
# layouts, holes, designs


def uniform_groups(g: int, n: int) -> tuple[tuple[int, ...], ...]:
    """Groups ``{i + n*j : 0 <= j < g}`` for ``0 <= i < n``."""
    return tuple(tuple(i + n * j for j in range(g)) for i in range(n))


def type_descriptor(sizes: Iterable[int]) -> str:
    counts = Counter(sizes)
    return "".join(f"{s}^{counts[s]}" for s in sorted(counts))


@dataclass(frozen=True)
class HolePattern:
    """Hole sets removed from the base multipartite graph.

    ``kind`` is one of ``none``, ``fat`` (one hole that is a union of whole
    groups), ``transversal`` (one hole meeting every group equally) or
    ``multi`` (several disjoint transversal holes).
    """

    kind: str = "none"
    sets: tuple[frozenset[int], ...] = ()

    def __post_init__(self):
        if self.kind not in ("none", "fat", "transversal", "multi"):
            raise ValueError(f"unknown hole kind {self.kind!r}")
        if self.kind == "none" and self.sets:
            raise ValueError("kind 'none' cannot carry hole sets")
        seen: set[int] = set()
        for s in self.sets:
            if seen & s:
                raise ValueError("hole sets must be disjoint")
            seen |= s

    @classmethod
    def none(cls) -> HolePattern:
        return cls()

    @classmethod
    def fat(cls, hole: Iterable[int]) -> HolePattern:
        return cls("fat", (frozenset(hole),))

    @classmethod
    def transversal(cls, hole: Iterable[int]) -> HolePattern:
        return cls("transversal", (frozenset(hole),))

    @classmethod
    def multi(cls, holes: Iterable[Iterable[int]]) -> HolePattern:
        return cls("multi", tuple(frozenset(h) for h in holes))


@dataclass(frozen=True)
class Design:
    """A packing of a (holey) complete multipartite graph by K4-e blocks."""

    groups: tuple[tuple[int, ...], ...]
    blocks: tuple[Block, ...]
    holes: HolePattern = field(default_factory=HolePattern)
    descriptor: str = ""

    @classmethod
    def build(cls, groups, blocks, holes: HolePattern | None = None, descriptor: str = "") -> Design:
        groups = tuple(tuple(sorted(G)) for G in groups)
        blocks = tuple(sorted(b.canonical() for b in blocks))
        return cls(groups, blocks, holes or HolePattern(), descriptor or type_descriptor(len(G) for G in groups))

    @cached_property
    def n_points(self) -> int:
        return sum(len(G) for G in self.groups)

    @cached_property
    def group_of(self) -> tuple[int, ...]:
        out = [-1] * self.n_points
        for i, G in enumerate(self.groups):
            for v in G:
                out[v] = i
        return tuple(out)

    @cached_property
    def hole_of(self) -> tuple[int, ...]:
        out = [-1] * self.n_points
        for i, S in enumerate(self.holes.sets):
            for v in S:
                out[v] = i
        return tuple(out)

    def is_allowed(self, u: int, v: int) -> bool:
        if u == v or self.group_of[u] == self.group_of[v]:
            return False
        h = self.hole_of[u]
        return h < 0 or h != self.hole_of[v]

    @cached_property
    def allowed_edges(self) -> frozenset[Pair]:
        go, ho = self.group_of, self.hole_of
        out = []
        for u in range(self.n_points):
            gu, hu = go[u], ho[u]
            for v in range(u + 1, self.n_points):
                if go[v] != gu and (hu < 0 or ho[v] != hu):
                    out.append((u, v))
        return frozenset(out)

    @cached_property
    def covered_edges(self) -> frozenset[Pair]:
        return frozenset(e for b in self.blocks for e in b.edges())

    @cached_property
    def leave(self) -> frozenset[Pair]:
        return self.allowed_edges - self.covered_edges

    def leave_class(self) -> LeaveClass:
        return classify_leave(self.leave)

    @property
    def group_sizes(self) -> tuple[int, ...]:
        return tuple(len(G) for G in self.groups)

    def uniform(self) -> tuple[int, int] | None:
        """(g, n) when all groups share one size."""
        sizes = set(self.group_sizes)
        if len(sizes) != 1:
            return None
        return sizes.pop(), len(self.groups)

    def relabel(self, mapping: Sequence[int], descriptor: str | None = None) -> Design:
        groups = [tuple(mapping[v] for v in G) for G in self.groups]
        holes = HolePattern(self.holes.kind, tuple(frozenset(mapping[v] for v in S) for S in self.holes.sets))
        return Design.build(groups, (b.relabel(mapping) for b in self.blocks), holes, descriptor or self.descriptor)

    def with_blocks(self, blocks: Iterable[Block]) -> Design:
        return Design.build(self.groups, blocks, self.holes, self.descriptor)

    # -- JSON ---------------------------------------------------------------

    def to_dict(self, leave_class: LeaveClass | None = None) -> dict:
        out = {
            "version": JSON_VERSION,
            "type": self.descriptor,
            "groups": [list(G) for G in self.groups],
            "hole": {"kind": self.holes.kind, "sets": [sorted(S) for S in self.holes.sets]},
            "blocks": [b.as_list() for b in self.blocks],
            "leave": [list(e) for e in sorted(self.leave)],
        }
        if leave_class is not None:
            out["leave_class"] = {"tag": leave_class.tag, "paper_name": leave_class.paper_name}
        return out

    def to_json(self, leave_class: LeaveClass | None = None, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(leave_class), indent=indent)

    @classmethod
    def from_dict(cls, data: Mapping) -> Design:
        if data.get("version") != JSON_VERSION:
            raise ValueError(f"unsupported design version {data.get('version')!r}")
        hole = data.get("hole") or {"kind": "none", "sets": []}
        holes = HolePattern(hole["kind"], tuple(frozenset(int(v) for v in S) for S in hole["sets"]))
        groups = [[int(v) for v in G] for G in data["groups"]]
        blocks = []
        for row in data["blocks"]:
            if len(row) != 4:
                raise ValueError(f"block rows need four ids, got {row!r}")
            blocks.append(Block.of([int(v) for v in row]))
        # keep duplicates so a verifier can see them
        groups_t = tuple(tuple(sorted(G)) for G in groups)
        flat = sorted(v for G in groups_t for v in G)
        if flat != list(range(len(flat))):
            raise ValueError("group ids must partition 0..N-1")
        return cls(groups_t, tuple(sorted(blocks)), holes, data.get("type", ""))

    @classmethod
    def from_json(cls, text: str) -> Design:
        return cls.from_dict(json.loads(text))


def expected_block_count(design: Design, family: str = "exact") -> int:
    """Block count predicted by edge arithmetic.

    ``exact`` families (GDD, IGDD, HGDD) must have an edge count divisible by
    five; ``mgdp`` families use ``D(g^n)``.
    """
    edges = len(design.allowed_edges)
    if family == "mgdp":
        shape = design.uniform()
        if shape is None or design.holes.kind != "none":
            raise ValueError("mgdp families need uniform groups and no holes")
        return max_blocks(*shape)
    if edges % 5:
        raise NonIntegral(f"{design.descriptor}: {edges} edges is not a multiple of 5")
    return edges // 5


# ---------------------------------------------------------------------------
# development


@dataclass(frozen=True)
class DevelopmentRule:
    """Base blocks developed under the cyclic group of one permutation."""

    n_points: int
    cycles: tuple[tuple[int, ...], ...]
    base: tuple[tuple[Block, int | None], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for cyc in self.cycles:
            if seen & set(cyc) or len(set(cyc)) != len(cyc):
                raise ValueError("permutation cycles must be disjoint")
            seen |= set(cyc)
        if any(v < 0 or v >= self.n_points for v in seen):
            raise ValueError("cycle entry out of range")
        order = self.order
        for blk, k in self.base:
            if k is not None and order % k:
                raise ValueError(f"orbit override {k} does not divide order {order}")

    @cached_property
    def permutation(self) -> tuple[int, ...]:
        perm = list(range(self.n_points))
        for cyc in self.cycles:
            for i, v in enumerate(cyc):
                perm[v] = cyc[(i + 1) % len(cyc)]
        return tuple(perm)

    @cached_property
    def order(self) -> int:
        return reduce(math.lcm, (len(c) for c in self.cycles), 1)


def develop(rule: DevelopmentRule) -> list[Block]:
    perm = rule.permutation
    out: list[Block] = []
    seen: set[Block] = set()
    for base, override in rule.base:
        blk = base
        for _ in range(override or rule.order):
            canon = blk.canonical()
            if canon in seen:
                raise DuplicateBlock(f"developing {base} repeats {canon}")
            seen.add(canon)
            out.append(canon)
            blk = Block(perm[blk.a], perm[blk.b], perm[blk.c], perm[blk.d])
    return out


def cycles_of(perm: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Cycle decomposition (fixed points dropped)."""
    seen = [False] * len(perm)
    out = []
    for s in range(len(perm)):
        if seen[s]:
            continue
        cyc = [s]
        seen[s] = True
        x = perm[s]
        while x != s:
            cyc.append(x)
            seen[x] = True
            x = perm[x]
        if len(cyc) > 1:
            out.append(tuple(cyc))
    return tuple(out)


def iter_pairs(points: Sequence[int]) -> Iterator[Pair]:
    for u, v in itertools.combinations(points, 2):
        yield pair(u, v)
