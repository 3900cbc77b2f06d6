"""Predicates certifying packings, exact designs, MGDPs, frames and resolutions.

Every check returns a :class:`Report`; nothing here raises on a bad design.
Iteration order is fixed (sorted blocks, sorted pairs) so reports are
reproducible.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import NonIntegral, UnclassifiableLeave, VerificationError
from .model import Design, LeaveClass, Pair, classify_leave, expected_block_count, pair


class ViolationKind(enum.Enum):
    InvalidVertex = "InvalidVertex"
    IntraGroupEdge = "IntraGroupEdge"
    HoleEdge = "HoleEdge"
    DuplicateEdge = "DuplicateEdge"
    NonEmptyLeave = "NonEmptyLeave"
    WrongLeaveClass = "WrongLeaveClass"
    WrongBlockCount = "WrongBlockCount"
    WrongFamily = "WrongFamily"
    BadHole = "BadHole"
    NotMatching = "NotMatching"
    NotSpanning = "NotSpanning"
    NotPartition = "NotPartition"
    NotParallel = "NotParallel"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    detail: str
    block: tuple[int, ...] | None = None
    edge: Pair | None = None

    def __str__(self) -> str:
        return f"{self.kind.value}: {self.detail}"


@dataclass
class Report:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    @property
    def count(self) -> int:
        return len(self.violations)

    @property
    def kinds(self) -> set[ViolationKind]:
        return {v.kind for v in self.violations}

    def add(self, kind: ViolationKind, detail: str, block=None, edge=None) -> None:
        self.violations.append(Violation(kind, detail, tuple(block) if block is not None else None, edge))

    def raise_for(self, what: str = "design") -> None:
        if not self.ok:
            raise VerificationError(self, f"{what} failed verification: {self.summary()}")

    def summary(self) -> str:
        if self.ok:
            return "ok"
        more = f" (+{self.count - 1} more)" if self.count > 1 else ""
        return f"{self.first}{more}"

    def __bool__(self) -> bool:
        return self.ok


# ---------------------------------------------------------------------------
# packings


def _check_layout(d: Design, rep: Report) -> bool:
    n = d.n_points
    flat = sorted(v for G in d.groups for v in G)
    if flat != list(range(n)):
        rep.add(ViolationKind.InvalidVertex, "groups do not partition 0..N-1")
        return False
    for S in d.holes.sets:
        bad = [v for v in S if not 0 <= v < n]
        if bad:
            rep.add(ViolationKind.InvalidVertex, f"hole vertex {bad[0]} out of range")
            return False
    return True


def verify_packing(d: Design) -> Report:
    """Cross-group, hole-avoiding and edge-disjoint blocks."""
    rep = Report()
    if not _check_layout(d, rep):
        return rep
    n = d.n_points
    go, ho = d.group_of, d.hole_of
    blocks = sorted(b.canonical() for b in d.blocks)
    for b in blocks:
        bad = [v for v in b.vertices if not 0 <= v < n]
        if bad:
            rep.add(ViolationKind.InvalidVertex, f"vertex {bad[0]} of {b} out of range", b.vertices)
    if not rep.ok:
        return rep
    for b in blocks:
        for u, v in b.edges():
            if go[u] == go[v]:
                rep.add(ViolationKind.IntraGroupEdge, f"edge {u}-{v} of {b} lies inside group {go[u]}", b.vertices, (u, v))
            elif ho[u] >= 0 and ho[u] == ho[v]:
                rep.add(ViolationKind.HoleEdge, f"edge {u}-{v} of {b} lies inside hole {ho[u]}", b.vertices, (u, v))
    owner: dict[Pair, object] = {}
    for b in blocks:
        for e in b.edges():
            if e in owner:
                rep.add(ViolationKind.DuplicateEdge, f"edge {e[0]}-{e[1]} covered by {owner[e]} and {b}", b.vertices, e)
            else:
                owner[e] = b
    return rep


def verify_exact(d: Design) -> Report:
    """A packing whose leave is empty (GDD, IGDD or HGDD)."""
    rep = verify_packing(d)
    if not rep.ok:
        return rep
    leave = sorted(d.leave)
    if leave:
        rep.add(ViolationKind.NonEmptyLeave, f"{len(leave)} uncovered edges, first {leave[0]}", edge=leave[0])
        return rep
    try:
        want = expected_block_count(d, "exact")
    except NonIntegral as exc:  # pragma: no cover - an empty leave forces divisibility
        rep.add(ViolationKind.WrongBlockCount, str(exc))
        return rep
    if len(d.blocks) != want:
        rep.add(ViolationKind.WrongBlockCount, f"{len(d.blocks)} blocks, expected {want}")
    return rep


def verify_mgdp(d: Design, expected: LeaveClass | None) -> Report:
    """A maximum packing of K_{n(g)} whose leave has the expected class.

    ``expected=None`` is used for the three short pairs whose leaves are
    reported raw; only the block count is then checked.
    """
    rep = verify_packing(d)
    if not rep.ok:
        return rep
    shape = d.uniform()
    if d.holes.kind != "none" or shape is None:
        rep.add(ViolationKind.WrongFamily, "an MGDP needs equal groups and no holes")
        return rep
    want = expected_block_count(d, "mgdp")
    if len(d.blocks) != want:
        rep.add(ViolationKind.WrongBlockCount, f"{len(d.blocks)} blocks, expected {want}")
    if expected is not None:
        try:
            got = classify_leave(d.leave)
        except UnclassifiableLeave as exc:
            rep.add(ViolationKind.WrongLeaveClass, str(exc))
            return rep
        if got is not expected:
            rep.add(ViolationKind.WrongLeaveClass, f"leave is {got.tag}, expected {expected.tag}")
    return rep


def check_hole_shape(d: Design, family: str) -> Report:
    """Hole pattern matches the family's layout invariants."""
    rep = Report()
    kind = d.holes.kind
    want = {"gdd": "none", "mgdp": "none", "igdd1": "fat", "igdd2": "transversal", "hgdd": "multi"}.get(family)
    if want is None:
        raise ValueError(f"unknown family {family!r}")
    if kind != want:
        rep.add(ViolationKind.WrongFamily, f"family {family} needs hole kind {want}, found {kind}")
        return rep
    if kind == "fat":
        hole = d.holes.sets[0]
        sizes = {len(G) for G in d.groups}
        inside = [G for G in d.groups if set(G) <= hole]
        if sum(len(G) for G in inside) != len(hole) or any(set(G) & hole and not set(G) <= hole for G in d.groups):
            rep.add(ViolationKind.BadHole, "fat hole must be a union of groups")
        elif len(sizes) != 1:
            rep.add(ViolationKind.BadHole, "fat-hole designs need equal fine groups")
    elif kind in ("transversal", "multi"):
        for j, S in enumerate(d.holes.sets):
            meet = {len(S & set(G)) for G in d.groups}
            if len(meet) != 1:
                rep.add(ViolationKind.BadHole, f"hole {j} meets groups unevenly: {sorted(meet)}")
    return rep


def verify_family(d: Design, family: str, expected: LeaveClass | None = None) -> Report:
    """Dispatch used by the command line: ``mgdp`` or one of the exact families."""
    if family == "mgdp":
        rep = check_hole_shape(d, family)
        return rep if not rep.ok else verify_mgdp(d, expected)
    rep = check_hole_shape(d, family)
    if not rep.ok:
        return rep
    rep = verify_exact(d)
    if rep.ok and expected is not None and expected is not LeaveClass.E0:
        rep.add(ViolationKind.WrongLeaveClass, f"leave is E0, expected {expected.tag}")
    return rep


# ---------------------------------------------------------------------------
# frames and resolutions


def verify_frame(
    classes: Mapping[tuple[int, int], Iterable[Pair]],
    groups: Sequence[Sequence[int]],
) -> Report:
    """Each class (i, j) is a perfect matching of V minus G_i; together they partition all cross pairs."""
    rep = Report()
    n_points = sum(len(G) for G in groups)
    group_of = {}
    for i, G in enumerate(groups):
        for v in G:
            group_of[v] = i
    want_keys = {(i, j) for i in range(len(groups)) for j in range(len(groups[i]))}
    if set(classes) != want_keys:
        missing = sorted(want_keys - set(classes))
        extra = sorted(set(classes) - want_keys)
        rep.add(ViolationKind.NotPartition, f"class labels differ: missing {missing[:3]}, extra {extra[:3]}")
        return rep
    seen: Counter = Counter()
    for key in sorted(classes):
        i = key[0]
        target = set(range(n_points)) - set(groups[i])
        hit: Counter = Counter()
        for e in classes[key]:
            u, v = pair(*e)
            if u == v or u not in group_of or v not in group_of or group_of[u] == group_of[v]:
                rep.add(ViolationKind.NotMatching, f"class {key}: pair {u}-{v} is not a cross-group pair", edge=(u, v))
                continue
            hit[u] += 1
            hit[v] += 1
            seen[(u, v)] += 1
        doubled = sorted(x for x, c in hit.items() if c > 1)
        if doubled:
            rep.add(ViolationKind.NotMatching, f"class {key}: vertex {doubled[0]} used twice")
        stray = sorted(x for x in hit if x not in target)
        if stray:
            rep.add(ViolationKind.NotMatching, f"class {key}: vertex {stray[0]} lies in group {i}")
        uncovered = sorted(target - set(hit))
        if uncovered:
            rep.add(ViolationKind.NotSpanning, f"class {key}: vertex {uncovered[0]} is uncovered")
    for (u, v), c in sorted(seen.items()):
        if c > 1:
            rep.add(ViolationKind.NotPartition, f"pair {u}-{v} lies in {c} classes", edge=(u, v))
    total = sum(len(G) for G in groups) ** 2 - sum(len(G) ** 2 for G in groups)
    if rep.ok and len(seen) != total // 2:
        rep.add(ViolationKind.NotPartition, f"{len(seen)} pairs covered, expected {total // 2}")
    return rep


def verify_resolvable(classes: Sequence[Iterable[Sequence[int]]], points: Iterable[int]) -> Report:
    """Each class is a set of blocks partitioning the point set."""
    rep = Report()
    points = set(points)
    for k, cls in enumerate(classes):
        hit: Counter = Counter()
        for blk in cls:
            hit.update(blk)
        for v in sorted(hit):
            if v not in points:
                rep.add(ViolationKind.NotParallel, f"class {k}: vertex {v} is not a point")
            elif hit[v] > 1:
                rep.add(ViolationKind.NotParallel, f"class {k}: vertex {v} appears {hit[v]} times")
        for v in sorted(points - set(hit)):
            rep.add(ViolationKind.NotParallel, f"class {k}: vertex {v} is missing")
    return rep


def verify_pair_coverage(blocks: Iterable[Sequence[int]], points: int, allowed: Iterable[Pair] | None = None) -> Report:
    """Every pair of ``0..points-1`` (or of ``allowed``) lies in exactly one block."""
    rep = Report()
    seen: Counter = Counter()
    for blk in blocks:
        blk = list(blk)
        if len(set(blk)) != len(blk):
            rep.add(ViolationKind.InvalidVertex, f"block {blk} repeats a point", blk)
            continue
        for x in range(len(blk)):
            for y in range(x + 1, len(blk)):
                seen[pair(blk[x], blk[y])] += 1
    want = set(allowed) if allowed is not None else {(u, v) for u in range(points) for v in range(u + 1, points)}
    for e, c in sorted(seen.items()):
        if e not in want:
            rep.add(ViolationKind.IntraGroupEdge, f"pair {e} is not allowed", edge=e)
        elif c > 1:
            rep.add(ViolationKind.DuplicateEdge, f"pair {e} covered {c} times", edge=e)
    missing = sorted(want - set(seen))
    if missing:
        rep.add(ViolationKind.NonEmptyLeave, f"{len(missing)} pairs uncovered, first {missing[0]}", edge=missing[0])
    return rep
