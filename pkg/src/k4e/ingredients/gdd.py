"""(K4-e)-GDDs of type g^n and the other search-produced ingredients.

Searched designs are cached on disk (see :mod:`.cache`); everything else is
rebuilt from the catalog and the constructions on demand.
"""

from __future__ import annotations

import logging
from functools import lru_cache

from .. import catalog
from ..errors import BudgetExceeded, Infeasible, Timeout, UnsupportedIngredient
from ..model import Design, HolePattern, LeaveClass, uniform_groups
from ..verify import verify_exact, verify_family, verify_mgdp
from . import cache
from .pbd import PBD, pbd345

log = logging.getLogger(__name__)

SEARCH_SEEDS = (1, 2, 3, 4, 5)
MAX_SEARCHED_ONES = 16
PRIME_BASES = (2, 3, 5, 7, 11, 13)
FIVE_BASES = (3, 4, 5, 6, 8)


def _constructions():
    from .. import constructions

    return constructions


def gdd_exists(g: int, n: int) -> bool:
    """Necessary and sufficient condition for a (K4-e)-GDD of type g^n."""
    return n >= 3 and g >= 1 and (g * n * (n - 1)) % 5 == 0 and (g, n) != (1, 5)


# ---------------------------------------------------------------------------
# searches


def _within_group_shift(g: int, n: int) -> list[int]:
    """Point i + n j goes to i + n (j + 1 mod g)."""
    return [v % n + n * ((v // n + 1) % g) for v in range(g * n)]


def _search_exact(shell: Design, symmetric: bool) -> Design:
    from ..search import PackingInstance, hill_climb, orbit_search, search_random

    if symmetric:
        g, n = shell.uniform()
        perm = _within_group_shift(g, n)
        for seed in SEARCH_SEEDS:
            try:
                return orbit_search(shell, perm, node_budget=2_000_000, time_budget=300, seed=seed)
            except (Infeasible, BudgetExceeded) as exc:
                log.info("orbit search for %s, seed %d: %s", shell.descriptor, seed, exc)
    inst = PackingInstance.exact(shell.groups, shell.holes, shell.descriptor)
    for seed in SEARCH_SEEDS:
        try:
            return search_random(inst, seed=seed, restarts=20, node_budget=100_000)
        except Timeout:
            continue
    return hill_climb(inst, seed=1)


@lru_cache(maxsize=None)
def searched_gdd(g: int, n: int) -> Design:
    """GDD g^n found by search (cyclic within groups when g > 1)."""
    shell = Design.build(uniform_groups(g, n), (), None, f"{g}^{n}")
    return cache.cached(f"gdd-{g}^{n}", lambda: _search_exact(shell, g > 1), lambda d: verify_family(d, "gdd"))


@lru_cache(maxsize=None)
def searched_igdd1(n: int, h: int) -> Design:
    """IGDD 1^(n,h): K_n minus a K_h, found by search."""
    groups = uniform_groups(1, n)
    shell = Design.build(groups, (), HolePattern.fat(range(h)), f"1^({n},{h})")
    return cache.cached(f"igdd1-1^({n},{h})", lambda: _search_exact(shell, False), lambda d: verify_family(d, "igdd1"))


@lru_cache(maxsize=None)
def searched_mgdp(g: int, n: int, leave: LeaveClass) -> Design:
    """MGDP of type g^n with a given leave class, by leave-placement search."""
    from ..search import ByClass, PackingInstance, search_random, solve_exact

    def build() -> Design:
        inst = PackingInstance.mgdp(g, n, ByClass(leave))
        for seed in SEARCH_SEEDS:
            try:
                return search_random(inst, seed=seed, restarts=20, node_budget=200_000)
            except Timeout:
                continue
        return solve_exact(inst)

    return cache.cached(f"mgdp-{g}^{n}-{leave.tag}", build, lambda d: verify_mgdp(d, leave))


# ---------------------------------------------------------------------------
# GDDs


def gdd_from_pbd(g: int, pbd: PBD):
    """GDD g^n from a PBD on n points and GDDs g^k for its block sizes."""
    C = _constructions()
    parts = {k: build_gdd(g, k) for k in sorted(pbd.sizes)}
    n = pbd.n
    groups = uniform_groups(g, n)
    blocks = []
    for K in pbd.blocks:
        P = parts[len(K)].design
        mapping = {}
        for m, Fm in enumerate(P.groups):
            mapping.update(zip(sorted(Fm), (K[m] + n * j for j in range(g))))
        blocks.extend(b.relabel(mapping) for b in P.blocks)
    out = Design.build(groups, blocks, None, f"{g}^{n}")
    verify_exact(out).raise_for(f"GDD {g}^{n}")
    trace = C.ConstructionTrace(
        C.RULES["gdd_from_pbd"],
        {"g": g, "n": n},
        [C.ConstructionTrace("ingredient:pbd345", {"n": n, "sizes": sorted(pbd.sizes)})] + [parts[k].trace for k in sorted(parts)],
    )
    return C.Built(out, trace)


def _catalog_gdd(g: int, n: int):
    cid = catalog.find("gdd", f"{g}^{n}")
    if cid is None:
        return None
    C = _constructions()
    return C.leaf(catalog.get(cid), f"catalog:{cid}")


@lru_cache(maxsize=None)
def build_gdd(g: int, n: int):
    """GDD g^n with its trace; see :func:`k4e_gdd` for the strategy order."""
    if not gdd_exists(g, n):
        raise Infeasible(f"no (K4-e)-GDD of type {g}^{n}: need n >= 3, 5 | g n (n-1), (g, n) != (1, 5)")
    C = _constructions()
    hit = _catalog_gdd(g, n)
    if hit is not None:
        return hit
    if g == 1:
        if n > MAX_SEARCHED_ONES:
            raise UnsupportedIngredient(f"GDD 1^{n}: searched only for n <= {MAX_SEARCHED_ONES}")
        return C.leaf(searched_gdd(1, n), "search:gdd", g=1, n=n)
    if g == 5:
        if n in FIVE_BASES:
            return C.leaf(searched_gdd(5, n), "search:gdd", g=5, n=n)
        return gdd_from_pbd(5, pbd345(n))
    if g % 5 == 0:
        return C.inflate(build_gdd(5, n), g // 5, f"{g}^{n}")
    if n % 5 in (0, 1) and n != 5:
        return C.inflate(build_gdd(1, n), g, f"{g}^{n}")
    if n == 5:
        p = min(q for q in range(2, g + 1) if g % q == 0)
        if p not in PRIME_BASES:
            raise UnsupportedIngredient(f"GDD {g}^5: smallest prime factor {p} has no searched base")
        if p == g:
            return C.leaf(searched_gdd(g, 5), "search:gdd", g=g, n=5)
        return C.inflate(build_gdd(p, 5), g // p, f"{g}^5")
    raise UnsupportedIngredient(f"GDD {g}^{n}: no strategy applies")  # pragma: no cover - gdd_exists rules it out


def k4e_gdd(g: int, n: int) -> Design:
    """A (K4-e)-GDD of type g^n.

    Strategies, in order: catalog or cache; g = 1 by search (n <= 16);
    g = 5 by search for n in {3, 4, 5, 6, 8} and by PBD closure otherwise;
    g = 0 mod 5 by inflating 5^n; n = 0, 1 mod 5 by inflating 1^n; n = 5 by
    inflating a searched p^5 for the smallest prime p dividing g.
    """
    return build_gdd(g, n).design
