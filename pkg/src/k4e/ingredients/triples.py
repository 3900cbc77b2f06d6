"""Steiner and Kirkman triple systems and P3-resolutions of triangle pairs."""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Sequence

from ..errors import Infeasible, SearchExhausted
from ..model import pair
from ..verify import verify_pair_coverage, verify_resolvable

Triple = tuple[int, int, int]
Path3 = tuple[int, int, int]  # (centre, end, end)

# Resolvable STS(15): 7 parallel classes; class 0 is {0,1,2}, {3,4,5}, ...
# Found once by exact-cover search and frozen here.
KTS15: tuple[tuple[Triple, ...], ...] = (
    ((0, 1, 2), (3, 4, 5), (6, 7, 8), (9, 10, 11), (12, 13, 14)),
    ((0, 3, 6), (1, 4, 9), (2, 5, 12), (7, 10, 13), (8, 11, 14)),
    ((0, 4, 10), (1, 8, 13), (2, 9, 14), (3, 7, 12), (5, 6, 11)),
    ((0, 5, 14), (1, 10, 12), (2, 7, 11), (3, 8, 9), (4, 6, 13)),
    ((0, 7, 9), (1, 6, 14), (2, 3, 13), (4, 11, 12), (5, 8, 10)),
    ((0, 8, 12), (1, 3, 11), (2, 6, 10), (4, 7, 14), (5, 9, 13)),
    ((0, 11, 13), (1, 5, 7), (2, 4, 8), (3, 10, 14), (6, 9, 12)),
)


@lru_cache(maxsize=None)
def sts(v: int) -> tuple[Triple, ...]:
    """Steiner triple system of order v (Bose for v = 3 mod 6, Skolem for v = 1 mod 6)."""
    if v < 3 or v % 6 not in (1, 3):
        raise Infeasible(f"no STS of order {v}: need v = 1 or 3 mod 6")
    if v == 3:
        triples = [(0, 1, 2)]
    elif v % 6 == 3:
        triples = _bose(v)
    else:
        triples = _skolem(v)
    out = tuple(sorted(tuple(sorted(t)) for t in triples))
    verify_pair_coverage(out, v).raise_for(f"STS({v})")
    return out


def _bose(v: int) -> list[Triple]:
    m = v // 3  # odd; commutative idempotent square (x + y)/2 mod m
    half = (m + 1) // 2

    def pt(x: int, i: int) -> int:
        return x + m * (i % 3)

    out = [(pt(x, 0), pt(x, 1), pt(x, 2)) for x in range(m)]
    for x, y in itertools.combinations(range(m), 2):
        z = (x + y) * half % m
        out.extend((pt(x, i), pt(y, i), pt(z, i + 1)) for i in range(3))
    return out


def _skolem(v: int) -> list[Triple]:
    t = (v - 1) // 6
    m = 2 * t  # half-idempotent commutative square: L(x, y) = sigma(x + y)

    def sigma(s: int) -> int:
        s %= m
        return s // 2 if s % 2 == 0 else t + s // 2

    def pt(x: int, i: int) -> int:
        return x + m * (i % 3)

    inf = 3 * m
    out = [(pt(x, 0), pt(x, 1), pt(x, 2)) for x in range(t)]
    for x in range(t):
        out.extend((inf, pt(x + t, i), pt(x, i + 1)) for i in range(3))
    for x, y in itertools.combinations(range(m), 2):
        z = sigma(x + y)
        out.extend((pt(x, i), pt(y, i), pt(z, i + 1)) for i in range(3))
    return out


def resolvable_kts15() -> tuple[tuple[Triple, ...], ...]:
    """KTS(15); removing any class leaves a resolvable K3-GDD of type 3^5."""
    verify_pair_coverage([t for c in KTS15 for t in c], 15).raise_for("KTS(15)")
    verify_resolvable(KTS15, range(15)).raise_for("KTS(15) resolution")
    return KTS15


def _paths(edges: set) -> list[Path3]:
    adj: dict[int, set[int]] = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return [(c, a, b) for c in sorted(adj) for a, b in itertools.combinations(sorted(adj[c]), 2)]


def p3_resolve(c1: Sequence[Sequence[int]], c2: Sequence[Sequence[int]]) -> tuple[tuple[Path3, ...], ...]:
    """Split the 2v edges of two triangle parallel classes into three P3 parallel classes.

    Each path is ``(centre, end, end)``. Exact cover over the edges and the
    (class, vertex) slots; the path through the smallest edge is pinned to
    class 0 to break the class-label symmetry.
    """
    from ..search import ExactCover

    points = sorted({v for t in c1 for v in t})
    if sorted({v for t in c2 for v in t}) != points:
        raise ValueError("classes must share a point set")
    if verify_resolvable([c1, c2], points).count:
        raise ValueError("both arguments must be parallel classes of triangles")
    v = len(points)
    if v % 3 or v < 9:
        raise ValueError("need v = 0 mod 3 and v >= 9")
    e1 = {pair(a, b) for t in c1 for a, b in itertools.combinations(t, 2)}
    e2 = {pair(a, b) for t in c2 for a, b in itertools.combinations(t, 2)}
    if e1 & e2:
        raise ValueError("classes must be edge-disjoint")
    edges = sorted(e1 | e2)
    eidx = {e: i for i, e in enumerate(edges)}
    pidx = {p: i for i, p in enumerate(points)}
    ncol = len(edges) + 3 * v
    rows, meta = [], []
    first = edges[0]
    for path in _paths(set(edges)):
        c, a, b = path
        pe = {pair(c, a), pair(c, b)}
        for k in range(3):
            if first in pe and k:
                continue
            rows.append(tuple(sorted(eidx[e] for e in pe)) + tuple(len(edges) + k * v + pidx[x] for x in path))
            meta.append((k, path))
    sol = ExactCover(ncol, rows, 0, None).solve()
    if sol is None:
        raise SearchExhausted("no P3 resolution of the two classes")
    classes = tuple(tuple(sorted(meta[i][1] for i in sol if meta[i][0] == k)) for k in range(3))
    verify_resolvable(classes, points).raise_for("P3 resolution")
    covered = sorted(pair(c, x) for cls in classes for c, a, b in cls for x in (a, b))
    if covered != edges:  # pragma: no cover - guaranteed by the exact cover
        raise SearchExhausted("P3 classes do not partition the edges")
    return classes
