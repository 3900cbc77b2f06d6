"""Design mutations shared by the verifier and acceptance tests."""

from __future__ import annotations

import random

from k4e.model import Block, Design
from k4e.verify import ViolationKind

KINDS = ("duplicate", "drop", "out_of_range", "intra_group", "hole_edge")


def _replace_block(d: Design, i: int, new: Block) -> Design:
    blocks = list(d.blocks)
    blocks[i] = new
    return Design(d.groups, tuple(blocks), d.holes, d.descriptor)


def mutate(d: Design, kind: str, rng: random.Random, exact: bool) -> tuple[Design, ViolationKind] | None:
    """One single-edit mutation and the violation it must trigger, or None if inapplicable.

    ``exact`` says whether ``d`` is checked as an exact design (empty leave)
    or as a maximum packing.
    """
    blocks = list(d.blocks)
    i = rng.randrange(len(blocks))
    b = blocks[i]
    if kind == "duplicate":
        return Design(d.groups, tuple(sorted(blocks + [b])), d.holes, d.descriptor), ViolationKind.DuplicateEdge
    if kind == "drop":
        rest = tuple(blocks[:i] + blocks[i + 1 :])
        want = ViolationKind.NonEmptyLeave if exact else ViolationKind.WrongBlockCount
        return Design(d.groups, rest, d.holes, d.descriptor), want
    verts = list(b.vertices)
    slot = rng.randrange(4)
    if kind == "out_of_range":
        verts[slot] = d.n_points + rng.randrange(5)
        return _replace_block(d, i, Block(*verts)), ViolationKind.InvalidVertex
    if kind == "intra_group":
        # move one vertex into the group of a vertex it is adjacent to
        other = verts[{0: 1, 1: 0, 2: 0, 3: 0}[slot]]
        G = d.groups[d.group_of[other]]
        choices = [v for v in G if v != other and v not in verts]
        if not choices:
            return None
        verts[slot] = rng.choice(choices)
        return _replace_block(d, i, Block(*verts)), ViolationKind.IntraGroupEdge
    if kind == "hole_edge":
        if d.holes.kind == "none":
            return None
        # rebuild a block around an edge inside a hole
        for S in d.holes.sets:
            inside = sorted(S)
            pairs = [(u, v) for u in inside for v in inside if u < v and d.group_of[u] != d.group_of[v]]
            if pairs:
                u, v = rng.choice(pairs)
                rest = [w for w in range(d.n_points) if d.group_of[w] not in (d.group_of[u], d.group_of[v])]
                if len(rest) < 2:
                    continue
                c, e = rng.sample(rest, 2)
                return _replace_block(d, i, Block(u, v, c, e)), ViolationKind.HoleEdge
        return None
    raise ValueError(kind)
