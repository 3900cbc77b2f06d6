"""Route selection for maximum packings with a prescribed minimum leave.

:func:`construct_mgdp` follows the case analysis of the existence theorem:
each (g, n, leave) goes to a catalog design, a GDD, or a hole-filling chain
whose ingredients (IGDDs, HGDDs, smaller MGDPs) are resolved recursively
through the catalog, the constructions, the ingredient providers and, as
a last resort, search. :func:`construct_igdd1` and :func:`construct_igdd2`
expose the hole-type ingredients on their own.

When a design has more than one route (for example MGDP 2^8 from the
catalog or from filling an IGDD), the catalog route wins.
"""

from __future__ import annotations

from functools import lru_cache

from . import catalog
from . import constructions as C
from .constructions import Built, ConstructionTrace, leaf
from .errors import (
    BudgetExceeded,
    Infeasible,
    KnownException,
    SearchExhausted,
    Timeout,
    Unsupported,
    VerificationError,
)
from .ingredients import gdd as G
from .ingredients.factor import two_frame
from .ingredients.pbd import PBD, pbd345
from .ingredients.triples import sts
from .model import SHORT_PAIRS, LeaveClass, admissible_leaves, leave_embeds, min_leave_size, sort_classes
from .verify import verify_mgdp

# g = 1 designs come from search; larger orders are outside the supported envelope.
MAX_SEARCHED_ORDER = G.MAX_SEARCHED_ONES

# The result that excludes leaves for each exceptional pair.
EXCLUSIONS = {
    (2, 3): "Lemma 2.1",
    (3, 3): "Lemma 2.2",
    (2, 4): "Lemma 2.3",
    (4, 3): "Lemma 2.4",
    (1, 5): "Theorem 1.4",
    (1, 7): "Theorem 1.4",
    (1, 8): "Theorem 1.4",
    (1, 9): "Theorem 1.4",
}

_ROUTE_ERRORS = (Infeasible, SearchExhausted, BudgetExceeded, Timeout)


# ---------------------------------------------------------------------------
# requests


def parse_leave(leave: LeaveClass | str) -> LeaveClass:
    if isinstance(leave, LeaveClass):
        return leave
    if isinstance(leave, str):
        return LeaveClass.parse(leave)
    raise TypeError(f"leave must be a LeaveClass or a tag, got {type(leave).__name__}")


def check_request(g: int, n: int, leave: LeaveClass | str) -> LeaveClass:
    """Validate (g, n, leave).

    Raises ValueError for malformed requests (wrong leave size, a leave that
    does not fit in K_{n(g)}) and KnownException when the leave is excluded
    for one of the exceptional pairs.
    """
    if not isinstance(g, int) or not isinstance(n, int) or g < 1 or n < 3:
        raise ValueError(f"need integers g >= 1 and n >= 3, got g={g!r}, n={n!r}")
    cls = parse_leave(leave)
    size = min_leave_size(g, n)
    if (g, n) in SHORT_PAIRS:
        raise KnownException(
            f"no MGDP of type {g}^{n} has a {size}-edge leave: its maximum packings have one block fewer "
            f"than the counting bound (Theorem 1.5; {EXCLUSIONS[(g, n)]})",
            EXCLUSIONS[(g, n)],
        )
    if cls.size != size:
        raise ValueError(f"leave {cls} has {cls.size} edges; minimum leaves of type {g}^{n} have {size}")
    if not leave_embeds(cls, g, n):
        raise ValueError(f"leave {cls} is not a subgraph of K_{{{n}({g})}}")
    if cls not in admissible_leaves(g, n):
        ref = EXCLUSIONS[(g, n)]
        allowed = ", ".join(c.tag for c in sort_classes(admissible_leaves(g, n)))
        raise KnownException(
            f"no MGDP of type {g}^{n} with leave {cls} exists (Theorem 1.5; {ref}); admissible: {allowed}",
            ref,
        )
    return cls


# ---------------------------------------------------------------------------
# public entry points


def construct_mgdp(g: int, n: int, leave: LeaveClass | str) -> Built:
    """A verified MGDP of type g^n with the given minimum leave, plus its trace.

    Raises ValueError for malformed requests, KnownException for excluded
    leaves of the exceptional pairs, and Unsupported when an ingredient has
    no available strategy (the message names it).
    """
    cls = check_request(g, n, leave)
    try:
        built = _mgdp(g, n, cls)
    except _ROUTE_ERRORS as exc:
        raise Unsupported(f"MGDP {g}^{n} with leave {cls}: ingredient failed: {exc}") from exc
    rep = verify_mgdp(built.design, cls)
    if not rep.ok:  # pragma: no cover - every construction verifies its output
        raise VerificationError(rep, f"MGDP {g}^{n} leave {cls}: {rep.summary()}")
    return built


@lru_cache(maxsize=None)
def construct_igdd1(g: int, n: int, h: int) -> Built:
    """IGDD of type g^(n,h): K_{n(g)} minus the edges inside h of its groups."""
    desc = C.igdd1_name(g, n, h)
    hit = _catalog("igdd1", desc)
    if hit is not None:
        return hit
    if (n, h) == (4, 2):
        base = C.block_igdd()
        return base if g == 1 else C.inflate_igdd1(base, g)
    if h % 2 == 0 and 2 * n == 3 * h + 2 and (g * (h + 2)) % 4 == 0:
        return C.igdd1_from_factorization(g, h)
    if (g, n, h) == (2, 7, 2):
        return C.fill_igdd1_nested(construct_igdd1(2, 7, 4), construct_igdd1(2, 4, 2))
    if (g, n, h) == (3, 8, 3):
        return C.igdd1_from_p3()
    if g == 4 and h in (2, 3, 4) and n == 5 + h:
        return C.inflate_igdd1(construct_igdd1(2, n, h), 2)
    if h == 4 and n in (12, 14):
        if g == 1:
            return leaf(G.searched_igdd1(n, 4), "search:igdd1", n=n, h=4)
        return C.inflate_igdd1(construct_igdd1(1, n, 4), g)
    if g in (2, 3, 4):
        for h0, fill_last in ((h, True), (h - 5, False)):
            if h0 in (2, 3, 4) and n % 5 == h0 and n >= 15 + h0:
                t = (n - h0) // 5
                return C.igdd1_from_gdd(G.build_gdd(5 * g, t), construct_igdd1(g, 5 + h0, h0), fill_last)
    raise Unsupported(f"no route to IGDD {desc}")


@lru_cache(maxsize=None)
def construct_igdd2(g: int, h: int, n: int) -> Built:
    """IGDD of type (g,h)^n: K_{n(g)} minus a transversal hole of h points per group."""
    desc = C.igdd2_name(g, h, n)
    hit = _catalog("igdd2", desc)
    if hit is not None:
        return hit
    if 2 * g == 3 * h and h % 2 == 0:
        k = h // 2
        if k * (n - 1) % 2:
            raise Unsupported(f"IGDD {desc} needs a 2-frame of type {k}^{n}, which does not exist")
        return C.igdd2_from_frame(two_frame(k, n))
    if n == 6 and (g, h) in ((4, 1), (7, 3), (11, 1), (6, 1), (7, 2), (8, 3), (9, 4)):
        raise Unsupported(f"no route to IGDD {desc}: n = 6 is not covered")
    if (g, h) in ((4, 1), (7, 3), (11, 1)) and n >= 7 and n != 8:
        return _from_pbd(g, h, pbd345(n))
    if (g, h) == (6, 1):
        return C.fill_igdd2_nested(construct_igdd2(6, 4, n), construct_igdd2(4, 1, n))
    if (g, h) == (7, 2) and n in (3, 5):
        return C.fill_igdd2_nested(construct_igdd2(7, 3, n), construct_igdd2(3, 2, n))
    if (g, h) == (8, 3) and n in (3, 5):
        hgdd = C.hgdd_from_gdd(G.build_gdd(1, 6), n)
        return C.fill_hgdd(hgdd, construct_igdd2(3, 2, n), keep="w")
    if (g, h) == (9, 4) and n in (3, 5):
        return C.fill_igdd2_nested(construct_igdd2(9, 6, n), construct_igdd2(6, 4, n))
    if (g, h) in ((7, 2), (8, 3), (9, 4)) and n >= 7 and n != 8:
        return _from_pbd(g, h, pbd345(n))
    if (g, h) == (11, 6) and n >= 7 and n % 6 in (1, 3):
        pbd = PBD(n, tuple(tuple(b) for b in sts(n)))
        return C.igdd2_from_pbd(pbd, {3: construct_igdd2(11, 6, 3)}, source="ingredient:sts")
    if (g, h) in ((12, 8), (14, 6)):
        return C.inflate_igdd2(construct_igdd2(g // 2, h // 2, n), 2)
    if (g, h) == (13, 7):
        hgdd = C.hgdd_from_gdd(construct_igdd1(3, 4, 2), n)
        return C.fill_hgdd(hgdd, construct_igdd2(4, 1, n), keep="w")
    r = g % 5
    if g >= 16 and r and h == 5 + r:
        hgdd = C.hgdd_from_gdd(G.build_gdd(5, (g - r) // 5), n)
        return C.fill_hgdd(hgdd, construct_igdd2(5 + r, r, n), keep="w")
    raise Unsupported(f"no route to IGDD {desc}")


# ---------------------------------------------------------------------------
# helpers


def _catalog(family: str, descriptor: str) -> Built | None:
    cid = catalog.find(family, descriptor)
    if cid is None:
        return None
    return leaf(catalog.get(cid), f"catalog:{cid}")


def _from_pbd(g: int, h: int, pbd: PBD) -> Built:
    parts = {k: construct_igdd2(g, h, k) for k in sorted(pbd.sizes)}
    return C.igdd2_from_pbd(pbd, parts)


def _sub(g: int, n: int, leave: LeaveClass) -> Built:
    """A filler MGDP requested by a route; its leave must be admissible."""
    if leave not in admissible_leaves(g, n):  # pragma: no cover - routes only request admissible fillers
        raise Unsupported(f"route needs MGDP {g}^{n} with leave {leave}, which is not admissible")
    return _mgdp(g, n, leave)


def _fill_fat(igdd: Built, g: int, h: int, leave: LeaveClass) -> Built:
    return C.fill_fatgroup_hole(igdd, _sub(g, h, leave))


def _fill_transversal(igdd: Built, h: int, n: int, leave: LeaveClass) -> Built:
    return C.fill_transversal_hole(igdd, _sub(h, n, leave))


def _gdd(g: int, n: int) -> Built:
    built = G.build_gdd(g, n)
    return Built(built.design, ConstructionTrace("ingredient:k4e_gdd", {"g": g, "n": n}, [built.trace]))


# ---------------------------------------------------------------------------
# dispatch


@lru_cache(maxsize=None)
def _mgdp(g: int, n: int, leave: LeaveClass) -> Built:
    cid = catalog.find_mgdp(g, n, leave)
    if cid is not None:
        return leaf(catalog.get(cid), f"catalog:{cid}")
    if g == 1:
        return _order_one(n, leave)
    if leave is LeaveClass.E0:
        return _gdd(g, n)
    if g in _SMALL:
        return _SMALL[g](n, leave)
    if g >= 16 and g % 5:
        r = g % 5
        return _fill_transversal(construct_igdd2(g, 5 + r, n), 5 + r, n, leave)
    raise Unsupported(f"no route for MGDP {g}^{n} with leave {leave}")  # pragma: no cover


def _order_one(n: int, leave: LeaveClass) -> Built:
    if n > MAX_SEARCHED_ORDER:
        raise Unsupported(f"MGDP 1^{n}: designs of type 1^n are searched only for n <= {MAX_SEARCHED_ORDER}")
    if leave is LeaveClass.E0:
        return _gdd(1, n)
    return leaf(G.searched_mgdp(1, n, leave), "search:mgdp", g=1, n=n, leave=leave.tag)


def _general_small(g: int, n: int, leave: LeaveClass) -> Built:
    """g in {2, 3, 4}, n >= 15: IGDD g^(n, 5+h) filled with an MGDP g^(5+h)."""
    h = n % 5
    if h not in (2, 3, 4) or n < 15 + h:
        raise Unsupported(f"no route for MGDP {g}^{n} with leave {leave}")
    return _fill_fat(construct_igdd1(g, n, 5 + h), g, 5 + h, leave)


def _g2(n: int, leave: LeaveClass) -> Built:
    if n in (7, 9, 12):
        return _fill_fat(construct_igdd1(2, n, 4), 2, 4, leave)
    if n == 8:
        return _fill_fat(construct_igdd1(2, 8, 3), 2, 3, leave)
    if n == 13:
        return _fill_fat(construct_igdd1(2, 13, 8), 2, 8, leave)
    if n == 14:
        return _fill_fat(construct_igdd1(2, 14, 7), 2, 7, leave)
    return _general_small(2, n, leave)


def _g3(n: int, leave: LeaveClass) -> Built:
    if n in (3, 7, 9, 13):
        return _fill_transversal(construct_igdd2(3, 2, n), 2, n, leave)
    if n == 8:
        return _fill_fat(construct_igdd1(3, 8, 3), 3, 3, leave)
    if n in (12, 14):
        return _fill_fat(construct_igdd1(3, n, 4), 3, 4, leave)
    return _general_small(3, n, leave)


def _g4(n: int, leave: LeaveClass) -> Built:
    if n in (7, 9, 12, 14):
        return _fill_fat(construct_igdd1(4, n, 4), 4, 4, leave)
    if n == 8:
        if leave is LeaveClass.E3_1:
            return _fill_fat(construct_igdd1(4, 8, 3), 4, 3, leave)
        return _fill_transversal(construct_igdd2(4, 1, 8), 1, 8, leave)
    if n == 13:
        return _fill_fat(construct_igdd1(4, 13, 8), 4, 8, leave)
    return _general_small(4, n, leave)


def _g6(n: int, leave: LeaveClass) -> Built:
    return _fill_transversal(construct_igdd2(6, 4, n), 4, n, leave)


def _g7(n: int, leave: LeaveClass) -> Built:
    return _fill_transversal(construct_igdd2(7, 3, n), 3, n, leave)


def _g8(n: int, leave: LeaveClass) -> Built:
    return _fill_transversal(construct_igdd2(8, 3, n), 3, n, leave)


def _g9(n: int, leave: LeaveClass) -> Built:
    if n == 3:
        return _fill_transversal(construct_igdd2(9, 6, 3), 6, 3, leave)
    return _fill_transversal(construct_igdd2(9, 4, n), 4, n, leave)


def _g11(n: int, leave: LeaveClass) -> Built:
    if n == 4 or n >= 10:
        return _fill_transversal(construct_igdd2(11, 1, n), 1, n, leave)
    if n in (3, 7, 9):
        return _fill_transversal(construct_igdd2(11, 6, n), 6, n, leave)
    if n == 8:
        return _fill_fat(construct_igdd1(11, 8, 3), 11, 3, leave)
    raise Unsupported(f"no route for MGDP 11^{n} with leave {leave}")  # pragma: no cover


def _g12(n: int, leave: LeaveClass) -> Built:
    return _fill_transversal(construct_igdd2(12, 8, n), 8, n, leave)


def _g13(n: int, leave: LeaveClass) -> Built:
    return _fill_transversal(construct_igdd2(13, 7, n), 7, n, leave)


def _g14(n: int, leave: LeaveClass) -> Built:
    return _fill_transversal(construct_igdd2(14, 6, n), 6, n, leave)


_SMALL = {2: _g2, 3: _g3, 4: _g4, 6: _g6, 7: _g7, 8: _g8, 9: _g9, 11: _g11, 12: _g12, 13: _g13, 14: _g14}

