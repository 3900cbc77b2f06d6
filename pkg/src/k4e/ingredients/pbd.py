"""Pairwise balanced designs with block sizes in {3, 4, 5}."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from ..errors import Infeasible, SearchExhausted
from ..verify import Report, verify_pair_coverage
from .latin import mols_count, transversal_design
from .triples import sts

SIZES = (3, 4, 5)


@dataclass(frozen=True)
class PBD:
    n: int
    blocks: tuple[tuple[int, ...], ...]

    @property
    def sizes(self) -> set[int]:
        return {len(b) for b in self.blocks}

    def verify(self) -> Report:
        rep = verify_pair_coverage(self.blocks, self.n)
        return rep


def in_closure(n: int) -> bool:
    """n admits a {3,4,5}-PBD."""
    return n >= 3 and n not in (6, 8)


@lru_cache(maxsize=None)
def _recipe(n: int) -> tuple:
    """How to build the PBD on n points; first matching rule wins."""
    if n in SIZES:
        return ("block",)
    if n % 6 in (1, 3):
        return ("sts",)
    fill = lambda s: s in (0, 1) or in_closure(s)  # noqa: E731
    for m in range(3, n):
        k = 2 + mols_count(m)
        if k < 4:
            continue
        for extra in (0, 1):
            if not (m + extra == 1 or in_closure(m + extra)):
                continue
            for u1 in range(m + 1):
                for u2 in range(m + 1) if k >= 5 else (0,):
                    if 3 * m + u1 + u2 + extra == n and fill(u1 + extra) and fill(u2 + extra):
                        return ("td", m, u1, u2, extra)
    return ("search",)


@lru_cache(maxsize=None)
def pbd345(n: int) -> PBD:
    """A (n, {3,4,5}, 1)-PBD for n >= 3, n not 6 or 8.

    Rules: a single block; an STS; or a TD(5, m) (TD(4, m) when only two
    MOLS exist) with its last two groups truncated to u1, u2 points and
    optionally one extra point joined to every group, whose groups are then
    filled recursively. Orders no rule reaches (only 11 below 50) are found
    by exact-cover search.
    """
    if not in_closure(n):
        raise Infeasible(f"no {{3,4,5}}-PBD on {n} points")
    recipe = _recipe(n)
    if recipe[0] == "block":
        blocks = [tuple(range(n))]
    elif recipe[0] == "sts":
        blocks = list(sts(n))
    elif recipe[0] == "td":
        blocks = _from_td(*recipe[1:])
    else:
        blocks = _search(n)
    out = PBD(n, tuple(sorted(tuple(sorted(b)) for b in blocks)))
    if not out.sizes <= set(SIZES):  # pragma: no cover
        raise AssertionError(f"PBD({n}) has block sizes {sorted(out.sizes)}")
    out.verify().raise_for(f"PBD({n})")
    return out


def _from_td(m: int, u1: int, u2: int, extra: int) -> list[tuple[int, ...]]:
    k = 5 if mols_count(m) >= 3 else 4
    td = transversal_design(k, m)
    keep = [set(range(m)) for _ in range(3)] + [set(range(u1)), set(range(u2))]
    # relabel kept points consecutively: group i point x
    label: dict[int, int] = {}
    groups: list[list[int]] = []
    for i in range(k):
        G = []
        for x in sorted(keep[i]):
            label[i * m + x] = len(label)
            G.append(label[i * m + x])
        groups.append(G)
    if k == 4:
        groups.append([])
    blocks = []
    for b in td:
        kept = tuple(label[p] for p in b if p in label)
        if len(kept) >= 3:
            blocks.append(kept)
        elif len(kept) == 2:  # pragma: no cover - groups 0..2 are never truncated
            raise AssertionError("truncation left a block of size 2")
    inf = len(label)
    for G in groups:
        G = G + [inf] if extra else G
        if len(G) >= 3:
            sub = pbd345(len(G))
            blocks.extend(tuple(G[x] for x in blk) for blk in sub.blocks)
        elif len(G) == 2:  # pragma: no cover - excluded by the recipe
            raise AssertionError("group of size 2 cannot be filled")
    return blocks


def _search(n: int) -> list[tuple[int, ...]]:
    from ..search import ExactCover

    pairs = list(itertools.combinations(range(n), 2))
    index = {p: i for i, p in enumerate(pairs)}
    cands = [b for k in sorted(SIZES, reverse=True) for b in itertools.combinations(range(n), k)]
    rows = [tuple(index[p] for p in itertools.combinations(b, 2)) for b in cands]
    sol = ExactCover(len(pairs), rows, 0, None).solve()
    if sol is None:  # pragma: no cover
        raise SearchExhausted(f"no {{3,4,5}}-PBD on {n} points")
    return [cands[i] for i in sol]
