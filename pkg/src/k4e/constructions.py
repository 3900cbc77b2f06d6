"""Recursive constructions for IGDDs, HGDDs and MGDPs.

Every operation takes verified designs (plain :class:`Design` or
:class:`Built`), re-checks them, and returns a :class:`Built` pairing the
verified output with a :class:`ConstructionTrace` node. Alignments are
canonical: groups are matched by index and points within a group (or a
group's share of a hole) in increasing order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, NamedTuple, Sequence

from .errors import LayoutMismatch, MissingPart, ParityViolation
from .ingredients.factor import Frame, one_factorization
from .ingredients.latin import idempotent_latin_square, latin_square
from .ingredients.pbd import PBD
from .ingredients.triples import p3_resolve, resolvable_kts15
from .model import Block, Design, HolePattern, uniform_groups
from .verify import Report, check_hole_shape, verify_exact, verify_packing

# Rule names are stable interface strings used in serialized traces.
RULES = {
    "fill_fatgroup_hole": "Con3.1",
    "igdd1_from_factorization": "Lem3.2",
    "igdd1_from_p3": "Lem3.4",
    "inflate": "Con3.6",
    "block_igdd": "Lem3.7",
    "fill_igdd1_nested": "Con3.9",
    "igdd1_from_gdd": "Con3.10",
    "fill_transversal_hole": "Con4.2",
    "igdd2_from_frame": "Lem4.6",
    "igdd2_from_pbd": "Con4.7",
    "inflate_igdd2": "Con4.10",
    "fill_igdd2_nested": "Con4.11",
    "fill_hgdd": "Con4.12",
    "hgdd_from_gdd": "Con4.14",
    "gdd_from_pbd": "PBD-closure",
}


@dataclass
class ConstructionTrace:
    rule: str
    params: dict[str, Any] = field(default_factory=dict)
    children: list[ConstructionTrace] = field(default_factory=list)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"rule": self.rule}
        if self.params:
            out["params"] = self.params
        if self.children:
            out["children"] = [c.to_dict() for c in self.children]
        return out

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def rules(self) -> list[str]:
        """Rule names in pre-order."""
        out = [self.rule]
        for c in self.children:
            out.extend(c.rules())
        return out

    def render(self, depth: int = 0) -> str:
        params = ", ".join(f"{k}={v}" for k, v in self.params.items() if k != "map")
        lines = ["  " * depth + self.rule + (f" ({params})" if params else "")]
        lines.extend(c.render(depth + 1) for c in self.children)
        return "\n".join(lines)


class Built(NamedTuple):
    design: Design
    trace: ConstructionTrace


def leaf(design: Design, source: str, **params) -> Built:
    """Wrap a catalog, ingredient or search design as a trace leaf."""
    return Built(design, ConstructionTrace(source, dict(params, type=design.descriptor)))


def _built(x: Design | Built, what: str) -> Built:
    if isinstance(x, Built):
        return x
    if isinstance(x, Design):
        return leaf(x, "input", role=what)
    raise TypeError(f"{what}: expected a Design, got {type(x).__name__}")


def _node(op: str, params: dict, children: Sequence[Built]) -> ConstructionTrace:
    return ConstructionTrace(RULES[op], params, [c.trace for c in children])


def _require_exact(d: Design, family: str, what: str) -> None:
    rep = check_hole_shape(d, family)
    if rep.ok:
        rep = verify_exact(d)
    if not rep.ok:
        raise LayoutMismatch(f"{what} is not a valid {family}: {rep.summary()}")


def _require_packing(d: Design, what: str) -> None:
    rep = verify_packing(d)
    if not rep.ok or d.holes.kind != "none":
        raise LayoutMismatch(f"{what} is not a hole-free packing: {rep.summary() if not rep.ok else 'has holes'}")


def _finish(d: Design, leave_expected: frozenset | None = None) -> Design:
    rep: Report
    if leave_expected is None or not leave_expected:
        rep = verify_exact(d)
    else:
        rep = verify_packing(d)
        if rep.ok and d.leave != leave_expected:
            raise AssertionError("construction changed the filler's leave")
    rep.raise_for("construction output")
    return d


# ---------------------------------------------------------------------------
# layout helpers


def _fat_hole_groups(d: Design) -> list[int]:
    hole = d.holes.sets[0]
    return [i for i, G in enumerate(d.groups) if set(G) <= hole]


def _hole_share(d: Design, hole: frozenset[int], i: int) -> list[int]:
    return sorted(set(d.groups[i]) & hole)


def _meet(d: Design, hole: frozenset[int]) -> int:
    sizes = {len(set(G) & hole) for G in d.groups}
    if len(sizes) != 1:
        raise LayoutMismatch("hole meets groups unevenly")
    return sizes.pop()


def igdd1_name(g: int, n: int, h: int) -> str:
    return f"{g}^({n},{h})"


def igdd2_name(g: int, h: int, n: int) -> str:
    return f"({g},{h})^{n}"


def _relabelled(blocks: Iterable[Block], mapping: Mapping[int, int]) -> list[Block]:
    return [b.relabel(mapping) for b in blocks]


# ---------------------------------------------------------------------------
# fat-hole (type 1) IGDDs


def fill_fatgroup_hole(igdd: Design | Built, filler: Design | Built) -> Built:
    """Fill the fat hole of an IGDD g^(n,h) with a packing of type g^h.

    The output leave is the filler's leave, mapped edge for edge.
    """
    a, b = _built(igdd, "igdd"), _built(filler, "filler")
    I, F = a.design, b.design
    _require_exact(I, "igdd1", "outer IGDD")
    _require_packing(F, "filler")
    hole_groups = _fat_hole_groups(I)
    if len(F.groups) != len(hole_groups) or any(
        len(F.groups[k]) != len(I.groups[i]) for k, i in enumerate(hole_groups)
    ):
        raise LayoutMismatch(f"filler type {F.descriptor} does not match the hole of {I.descriptor}")
    mapping = {}
    for k, i in enumerate(hole_groups):
        for u, v in zip(sorted(F.groups[k]), sorted(I.groups[i])):
            mapping[u] = v
    blocks = list(I.blocks) + _relabelled(F.blocks, mapping)
    leave = frozenset(tuple(sorted((mapping[u], mapping[v]))) for u, v in F.leave)
    g = len(I.groups[0])
    out = Design.build(I.groups, blocks, HolePattern(), f"{g}^{len(I.groups)}")
    _finish(out, leave)
    return Built(out, _node("fill_fatgroup_hole", {"hole_groups": hole_groups}, [a, b]))


def igdd1_from_factorization(g: int, h: int) -> Built:
    """IGDD g^((3h+2)/2, h): factor l of K_{(h+2)/2 (g)} pairs with hole pair l."""
    if h % 2 or h < 2 or (g * (h + 2)) % 4:
        raise ParityViolation(f"need h even and g(h+2) = 0 mod 4, got g={g}, h={h}")
    n = (3 * h + 2) // 2
    outer = n - h
    groups = uniform_groups(g, n)
    hole = sorted(v for i in range(h) for v in groups[i])
    factors = one_factorization(g, outer)
    if len(factors) * 2 != len(hole):  # pragma: no cover - arithmetic identity
        raise AssertionError("factor count does not match hole pairs")

    def lift(p: int) -> int:  # outer layout point i + outer*j -> group h+i
        return p % outer + h + n * (p // outer)

    blocks = []
    for l, factor in enumerate(factors):
        x, y = hole[2 * l], hole[2 * l + 1]
        blocks.extend(Block(lift(u), lift(v), x, y) for u, v in factor)
    out = _finish(Design.build(groups, blocks, HolePattern.fat(hole), igdd1_name(g, n, h)))
    return Built(out, ConstructionTrace(RULES["igdd1_from_factorization"], {"g": g, "h": h}, [
        ConstructionTrace("ingredient:one_factorization", {"g": g, "n": outer})]))


def igdd1_from_p3() -> Built:
    """IGDD 3^(8,3) from KTS(15): hole point x paired with P3 class x, blocks [x, a1, a2-a3]."""
    kts = resolvable_kts15()
    n, h, g = 8, 3, 3
    groups = uniform_groups(g, n)
    hole = sorted(v for i in range(h) for v in groups[i])
    # class 0 triangles become the outer groups 3..7
    mapping = {}
    for k, tri in enumerate(kts[0]):
        for u, v in zip(sorted(tri), sorted(groups[h + k])):
            mapping[u] = v
    p3_classes = []
    for c1, c2 in ((1, 2), (3, 4), (5, 6)):
        p3_classes.extend(p3_resolve(kts[c1], kts[c2]))
    if len(p3_classes) != len(hole):  # pragma: no cover
        raise AssertionError("need one P3 class per hole point")
    blocks = []
    for x, cls in zip(hole, p3_classes):
        for c, a, b in cls:
            blocks.append(Block(x, mapping[c], mapping[a], mapping[b]))
    out = _finish(Design.build(groups, blocks, HolePattern.fat(hole), igdd1_name(g, n, h)))
    return Built(out, ConstructionTrace(RULES["igdd1_from_p3"], {"n": n}, [
        ConstructionTrace("ingredient:kts15"), ConstructionTrace("ingredient:p3_resolve", {"pairs": 3})]))


def block_igdd() -> Built:
    """K4-e itself as IGDD 1^(4,2): the non-adjacent pair is the hole."""
    d = Design.build(uniform_groups(1, 4), [Block(0, 1, 2, 3)], HolePattern.fat([2, 3]), igdd1_name(1, 4, 2))
    _finish(d)
    return Built(d, ConstructionTrace(RULES["block_igdd"]))


def inflate(design: Design | Built, t: int, descriptor: str | None = None) -> Built:
    """Blow every point up to t copies (point v, copy x becomes v + N x).

    Block [a, b, c-d] and Latin cell (x, y, z = x + y mod t) give
    [(a, x), (b, y), (c, z)-(d, z)]; holes inflate with their points.
    """
    a = _built(design, "design")
    D = a.design
    if t < 1:
        raise ValueError("inflation factor must be positive")
    rep = verify_packing(D)
    if not rep.ok:
        raise LayoutMismatch(f"cannot inflate an invalid design: {rep.summary()}")
    N = D.n_points
    L = latin_square(t)

    def p(v: int, x: int) -> int:
        return v + N * x

    groups = [tuple(sorted(p(v, x) for v in G for x in range(t))) for G in D.groups]
    holes = HolePattern(D.holes.kind, tuple(frozenset(p(v, x) for v in S for x in range(t)) for S in D.holes.sets))
    blocks = [
        Block(p(b.a, x), p(b.b, y), p(b.c, L(x, y)), p(b.d, L(x, y)))
        for b in D.blocks
        for x in range(t)
        for y in range(t)
    ]
    out = Design.build(groups, blocks, holes, descriptor or D.descriptor)
    leave = frozenset(tuple(sorted((p(u, x), p(v, y)))) for u, v in D.leave for x in range(t) for y in range(t))
    if leave:
        _finish(out, leave)
    else:
        _finish(out)
    if len(out.blocks) != t * t * len(D.blocks):  # pragma: no cover
        raise AssertionError("inflation changed the block count ratio")
    return Built(out, _node("inflate", {"t": t}, [a]))


def inflate_igdd1(igdd: Design | Built, t: int) -> Built:
    """IGDD g^(n,h) to (gt)^(n,h)."""
    a = _built(igdd, "igdd")
    _require_exact(a.design, "igdd1", "IGDD")
    g = len(a.design.groups[0])
    n = len(a.design.groups)
    h = len(_fat_hole_groups(a.design))
    return inflate(a, t, igdd1_name(g * t, n, h))


def fill_igdd1_nested(outer: Design | Built, inner: Design | Built) -> Built:
    """Place an IGDD g^(h,h1) on the hole of an IGDD g^(n,h); the hole shrinks to h1 groups."""
    a, b = _built(outer, "outer"), _built(inner, "inner")
    O, I = a.design, b.design
    _require_exact(O, "igdd1", "outer IGDD")
    _require_exact(I, "igdd1", "inner IGDD")
    hole_groups = _fat_hole_groups(O)
    inner_hole = set(_fat_hole_groups(I))
    order = sorted(range(len(I.groups)), key=lambda k: (k not in inner_hole, k))
    if len(order) != len(hole_groups) or any(len(I.groups[k]) != len(O.groups[i]) for k, i in zip(order, hole_groups)):
        raise LayoutMismatch(f"inner {I.descriptor} does not fit the hole of {O.descriptor}")
    mapping = {}
    for k, i in zip(order, hole_groups):
        for u, v in zip(sorted(I.groups[k]), sorted(O.groups[i])):
            mapping[u] = v
    new_hole = [v for i in hole_groups[: len(inner_hole)] for v in O.groups[i]]
    g = len(O.groups[0])
    out = Design.build(
        O.groups,
        list(O.blocks) + _relabelled(I.blocks, mapping),
        HolePattern.fat(new_hole),
        igdd1_name(g, len(O.groups), len(inner_hole)),
    )
    _finish(out)
    return Built(out, _node("fill_igdd1_nested", {"hole_groups": hole_groups}, [a, b]))


def igdd1_from_gdd(gdd: Design | Built, part: Design | Built, fill_last: bool = False) -> Built:
    """GDD (gm)^t plus IGDD g^(m+h, h) parts sharing a new hole W of gh points.

    Each big group H_i is cut into m contiguous g-chunks and H_i + W is filled
    with a part for i >= 1 (and for i = 0 when ``fill_last``). The result is
    g^(mt+h, m+h), or g^(mt+h, h) when every group is filled.
    """
    a, b = _built(gdd, "gdd"), _built(part, "part")
    G, P = a.design, b.design
    _require_exact(G, "gdd", "GDD")
    _require_exact(P, "igdd1", "part")
    t = len(G.groups)
    if t < 2:
        raise LayoutMismatch("need at least two groups so that one is filled")
    sizes = {len(H) for H in G.groups}
    g = len(P.groups[0])
    p_hole = _fat_hole_groups(P)
    h = len(p_hole)
    m = len(P.groups) - h
    if sizes != {g * m}:
        raise LayoutMismatch(f"GDD groups must have size {g * m} for part {P.descriptor}")
    N = G.n_points
    W = [list(range(N + g * k, N + g * (k + 1))) for k in range(h)]
    chunks = [[sorted(H)[g * k : g * (k + 1)] for k in range(m)] for H in G.groups]
    blocks = list(G.blocks)
    p_outer = [k for k in range(len(P.groups)) if k not in p_hole]
    for i in range(t):
        if i == 0 and not fill_last:
            continue
        mapping = {}
        for k, target in zip(p_hole, W):
            mapping.update(zip(sorted(P.groups[k]), target))
        for k, target in zip(p_outer, chunks[i]):
            mapping.update(zip(sorted(P.groups[k]), target))
        blocks.extend(_relabelled(P.blocks, mapping))
    groups = [tuple(c) for c in chunks[0]] + [tuple(w) for w in W] + [tuple(c) for H in chunks[1:] for c in H]
    hole = [v for w in W for v in w] + ([] if fill_last else [v for c in chunks[0] for v in c])
    n_out = m * t + h
    h_out = h if fill_last else m + h
    out = Design.build(groups, blocks, HolePattern.fat(hole), igdd1_name(g, n_out, h_out))
    _finish(out)
    return Built(out, _node("igdd1_from_gdd", {"t": t, "m": m, "h": h, "fill_last": fill_last, "W": "contiguous chunks"}, [a, b]))


# ---------------------------------------------------------------------------
# transversal-hole (type 2) IGDDs


def fill_transversal_hole(igdd2: Design | Built, filler: Design | Built) -> Built:
    """Fill the hole of an IGDD (g,h)^n with a packing of type h^n; the leave is the filler's."""
    a, b = _built(igdd2, "igdd2"), _built(filler, "filler")
    I, F = a.design, b.design
    _require_exact(I, "igdd2", "IGDD")
    _require_packing(F, "filler")
    hole = I.holes.sets[0]
    if len(F.groups) != len(I.groups):
        raise LayoutMismatch(f"filler {F.descriptor} has the wrong number of groups for {I.descriptor}")
    mapping = {}
    for i, Fi in enumerate(F.groups):
        share = _hole_share(I, hole, i)
        if len(share) != len(Fi):
            raise LayoutMismatch(f"filler group {i} has {len(Fi)} points, hole share has {len(share)}")
        mapping.update(zip(sorted(Fi), share))
    leave = frozenset(tuple(sorted((mapping[u], mapping[v]))) for u, v in F.leave)
    g = len(I.groups[0])
    out = Design.build(I.groups, list(I.blocks) + _relabelled(F.blocks, mapping), HolePattern(), f"{g}^{len(I.groups)}")
    _finish(out, leave)
    return Built(out, _node("fill_transversal_hole", {}, [a, b]))


def igdd2_from_frame(frame: Frame, source: str = "ingredient:two_frame") -> Built:
    """IGDD (3g,2g)^n from a 2-frame of type g^n.

    Group i gains 2g new points i + n j (g <= j < 3g), paired as hole pairs
    (j = g+2k, g+2k+1) for class (i, k); each frame pair {p, q} of class
    (i, k) gives the block [p, q, x-y].
    """
    rep = frame.verify()
    if not rep.ok:
        raise LayoutMismatch(f"frame fails verification: {rep.summary()}")
    g, n = frame.g, frame.n
    groups = uniform_groups(3 * g, n)
    hole = [v for v in range(g * n, 3 * g * n)]
    blocks = []
    for (i, k), pairs in sorted(frame.classes.items()):
        x, y = i + n * (g + 2 * k), i + n * (g + 2 * k + 1)
        blocks.extend(Block(u, v, x, y) for u, v in pairs)
    out = _finish(Design.build(groups, blocks, HolePattern.transversal(hole), igdd2_name(3 * g, 2 * g, n)))
    return Built(out, ConstructionTrace(RULES["igdd2_from_frame"], {"g": g, "n": n}, [ConstructionTrace(source, {"type": f"{g}^{n}"})]))


def igdd2_from_pbd(pbd: PBD, parts: Mapping[int, Design | Built], source: str = "ingredient:pbd345") -> Built:
    """Replace each PBD block of size k by a copy of the part (g,h)^k on the matching groups.

    Output layout: group i is {i + n j : j < g} and the hole takes j < h.
    """
    built = {k: _built(v, f"part {k}") for k, v in parts.items()}
    missing = sorted(pbd.sizes - set(built))
    if missing:
        raise MissingPart(f"no part for PBD block size(s) {missing}")
    shape = None
    for k, b in built.items():
        P = b.design
        _require_exact(P, "igdd2", f"part of size {k}")
        if len(P.groups) != k:
            raise LayoutMismatch(f"part for size {k} has {len(P.groups)} groups")
        s = (len(P.groups[0]), _meet(P, P.holes.sets[0]))
        if shape not in (None, s):
            raise LayoutMismatch("parts disagree on (g, h)")
        shape = s
    g, h = shape
    n = pbd.n
    groups = uniform_groups(g, n)
    blocks = []
    for K in pbd.blocks:
        P = built[len(K)].design
        hole = P.holes.sets[0]
        mapping = {}
        for m, Fm in enumerate(P.groups):
            inside = sorted(set(Fm) & hole)
            outside = sorted(set(Fm) - hole)
            mapping.update(zip(inside, (K[m] + n * j for j in range(h))))
            mapping.update(zip(outside, (K[m] + n * j for j in range(h, g))))
        blocks.extend(_relabelled(P.blocks, mapping))
    hole = [i + n * j for i in range(n) for j in range(h)]
    out = _finish(Design.build(groups, blocks, HolePattern.transversal(hole), igdd2_name(g, h, n)))
    children = [ConstructionTrace(source, {"n": n, "sizes": sorted(pbd.sizes)})] + [built[k].trace for k in sorted(pbd.sizes)]
    return Built(out, ConstructionTrace(RULES["igdd2_from_pbd"], {"n": n}, children))


def inflate_igdd2(igdd2: Design | Built, t: int) -> Built:
    """IGDD (g,h)^n to (gt,ht)^n."""
    a = _built(igdd2, "igdd2")
    I = a.design
    _require_exact(I, "igdd2", "IGDD")
    g, h, n = len(I.groups[0]), _meet(I, I.holes.sets[0]), len(I.groups)
    res = inflate(a, t, igdd2_name(g * t, h * t, n))
    return Built(res.design, ConstructionTrace(RULES["inflate_igdd2"], {"t": t}, [a.trace]))


def fill_igdd2_nested(outer: Design | Built, inner: Design | Built) -> Built:
    """Place an IGDD (h,r)^n on the hole of an IGDD (g,h)^n, leaving a hole of r per group."""
    a, b = _built(outer, "outer"), _built(inner, "inner")
    O, I = a.design, b.design
    _require_exact(O, "igdd2", "outer IGDD")
    _require_exact(I, "igdd2", "inner IGDD")
    if len(O.groups) != len(I.groups):
        raise LayoutMismatch("outer and inner IGDDs differ in group count")
    hole = O.holes.sets[0]
    ihole = I.holes.sets[0]
    mapping = {}
    for i, Fi in enumerate(I.groups):
        share = _hole_share(O, hole, i)
        if len(share) != len(Fi):
            raise LayoutMismatch(f"inner group {i} has {len(Fi)} points, outer hole share has {len(share)}")
        inside = sorted(set(Fi) & ihole)
        outside = sorted(set(Fi) - ihole)
        mapping.update(zip(inside + outside, share))
    new_hole = [mapping[v] for v in ihole]
    g, r = len(O.groups[0]), _meet(I, ihole)
    out = Design.build(
        O.groups,
        list(O.blocks) + _relabelled(I.blocks, mapping),
        HolePattern.transversal(new_hole),
        igdd2_name(g, r, len(O.groups)),
    )
    _finish(out)
    return Built(out, _node("fill_igdd2_nested", {}, [a, b]))


# ---------------------------------------------------------------------------
# holey GDDs


def _coarse_groups(d: Design) -> list[list[int]]:
    """Groups of the input seen as a GDD: a fat hole counts as one more group."""
    if d.holes.kind == "none":
        return [sorted(G) for G in d.groups]
    if d.holes.kind == "fat":
        hole = d.holes.sets[0]
        return [sorted(G) for G in d.groups if not set(G) <= hole] + [sorted(hole)]
    raise LayoutMismatch("HGDD input must be a GDD or a fat-hole IGDD")


def hgdd_from_gdd(gdd: Design | Built, n: int) -> Built:
    """HGDD (n, sizes of the input's groups) from an idempotent Latin square of order n.

    Point (level x, input point v) is x + n v. Block [a, b, c-d] and levels
    x != y give [(x, a), (y, b), (z, c)-(z, d)] with z = L(x, y).
    """
    a = _built(gdd, "gdd")
    D = a.design
    rep = verify_exact(D)
    if not rep.ok:
        raise LayoutMismatch(f"HGDD input fails verification: {rep.summary()}")
    coarse = _coarse_groups(D)
    L = idempotent_latin_square(n)

    def p(x: int, v: int) -> int:
        return x + n * v

    N = D.n_points
    groups = [tuple(sorted(p(x, v) for v in range(N))) for x in range(n)]
    holes = HolePattern.multi([p(x, v) for x in range(n) for v in C] for C in coarse)
    blocks = []
    for b in D.blocks:
        for x in range(n):
            for y in range(n):
                if x != y:
                    z = L(x, y)
                    blocks.append(Block(p(x, b.a), p(y, b.b), p(z, b.c), p(z, b.d)))
    sizes = [len(C) for C in coarse]
    kinds = []
    for s in sizes:
        if not kinds or kinds[-1][0] != s:
            kinds.append([s, 0])
        kinds[-1][1] += 1
    desc = f"({n},{' '.join(f'{s}^{c}' for s, c in kinds)})"
    out = _finish(Design.build(groups, blocks, holes, desc))
    if len(out.blocks) != (n * n - n) * len(D.blocks):  # pragma: no cover
        raise AssertionError("HGDD block count mismatch")
    return Built(out, _node("hgdd_from_gdd", {"n": n}, [a]))


def fill_hgdd(
    hgdd: Design | Built,
    part_h: Design | Built,
    part_w: Design | Built | None = None,
    keep: str = "w",
) -> Built:
    """Add r points per group and fill holes S_j + R with IGDDs (s+r, r)^n.

    Holes S_0..S_{u-1} have h points per group and the last hole S_u has w.
    ``keep="w"`` fills every S_j with j < u and keeps S_u + R, giving
    (hu+w+r, w+r)^n. ``keep="h"`` keeps S_{u-1} + R instead (filling S_u with
    ``part_w``), giving (hu+w+r, h+r)^n. ``keep="none"`` fills every hole
    and keeps R, giving (hu+w+r, r)^n.
    """
    if keep not in ("w", "h", "none"):
        raise ValueError("keep must be 'w', 'h' or 'none'")
    a = _built(hgdd, "hgdd")
    H = a.design
    _require_exact(H, "hgdd", "HGDD")
    ph = _built(part_h, "part_h")
    pw = _built(part_w, "part_w") if part_w is not None else None
    if keep != "w" and pw is None:
        raise MissingPart(f"variant keep={keep} needs a part for the w-hole")
    n = len(H.groups)
    holes = list(H.holes.sets)
    u = len(holes) - 1
    N = H.n_points
    r = _meet(ph.design, ph.design.holes.sets[0])
    R = [[N + x + n * k for k in range(r)] for x in range(n)]
    groups = [tuple(sorted(list(H.groups[x]) + R[x])) for x in range(n)]
    fills: list[tuple[int, Built]] = []
    for j in range(u):
        if keep == "h" and j == u - 1:
            continue
        fills.append((j, ph))
    if keep != "w":
        fills.append((u, pw))
    blocks = list(H.blocks)
    for j, part in fills:
        P = part.design
        _require_exact(P, "igdd2", "HGDD part")
        if len(P.groups) != n:
            raise LayoutMismatch("part has the wrong number of groups")
        phole = P.holes.sets[0]
        if _meet(P, phole) != r:
            raise LayoutMismatch("parts disagree on r")
        mapping = {}
        for x, Fx in enumerate(P.groups):
            share = sorted(set(H.groups[x]) & holes[j])
            inside = sorted(set(Fx) & phole)
            outside = sorted(set(Fx) - phole)
            if len(outside) != len(share):
                raise LayoutMismatch(f"part {P.descriptor} does not fit hole {j}")
            mapping.update(zip(inside, R[x]))
            mapping.update(zip(outside, share))
        blocks.extend(_relabelled(P.blocks, mapping))
    kept = {"w": holes[u], "h": holes[u - 1], "none": frozenset()}[keep]
    hole = sorted(set(kept) | {v for Rx in R for v in Rx})
    g = len(groups[0])
    out = Design.build(groups, blocks, HolePattern.transversal(hole), igdd2_name(g, len(hole) // n, n))
    _finish(out)
    children = [a, ph] + ([pw] if pw is not None else [])
    return Built(out, _node("fill_hgdd", {"keep": keep, "r": r, "u": u}, children))
