from __future__ import annotations

import pytest

from k4e import catalog
from k4e import constructions as C
from k4e.errors import LayoutMismatch, MissingPart
from k4e.ingredients.factor import two_frame
from k4e.ingredients.gdd import build_gdd, k4e_gdd, searched_igdd1, searched_mgdp
from k4e.ingredients.pbd import PBD, pbd345
from k4e.ingredients.triples import sts
from k4e.model import Design, LeaveClass, uniform_groups
from k4e.planner import construct_igdd1, construct_igdd2, construct_mgdp
from k4e.verify import verify_family, verify_mgdp


def igdd2(g: int, h: int, n: int) -> Design:
    return construct_igdd2(g, h, n).design


def sizes(d: Design) -> tuple[int, ...]:
    return tuple(sorted({len(G) for G in d.groups}))


def test_fat_hole_fill_with_leave():
    out = C.fill_fatgroup_hole(catalog.get("lem3.12-2^(8,3)"), construct_mgdp(2, 3, "E2_2"))
    assert verify_mgdp(out.design, LeaveClass.E2_2).ok and out.design.uniform() == (2, 8)
    assert out.trace.rule == C.RULES["fill_fatgroup_hole"]


@pytest.mark.parametrize("j", range(2, 12))
def test_fat_hole_fill_keeps_leave_class(j):
    leave = LeaveClass(f"E4_{j}")
    out = C.fill_fatgroup_hole(catalog.get("lem3.12-2^(9,4)"), construct_mgdp(2, 4, leave))
    assert verify_mgdp(out.design, leave).ok


@pytest.mark.parametrize("g,h,n", [(2, 4, 7), (4, 8, 13), (2, 8, 13)])
def test_igdd1_from_factorization(g, h, n):
    d = C.igdd1_from_factorization(g, h).design
    assert verify_family(d, "igdd1").ok and d.uniform() == (g, n) and len(d.holes.sets[0]) == g * h


def test_igdd1_from_p3():
    d = C.igdd1_from_p3().design
    assert verify_family(d, "igdd1").ok and len(d.blocks) == 45 and d.uniform() == (3, 8)


def test_block_igdd_and_inflation():
    base = C.block_igdd()
    assert verify_family(base.design, "igdd1").ok and len(base.design.blocks) == 1
    for t in (1, 3):
        d = C.inflate_igdd1(base, t).design
        assert verify_family(d, "igdd1").ok and d.uniform() == (t, 4) and len(d.blocks) == t * t
    d = C.inflate_igdd1(searched_igdd1(12, 4), 2).design
    assert verify_family(d, "igdd1").ok and d.uniform() == (2, 12)


def test_nested_fat_holes():
    outer = C.igdd1_from_factorization(2, 4)
    d = C.fill_igdd1_nested(outer, C.inflate_igdd1(C.block_igdd(), 2)).design
    assert verify_family(d, "igdd1").ok and len(d.holes.sets[0]) == 4
    d = C.fill_igdd1_nested(C.igdd1_from_factorization(4, 8), construct_igdd1(4, 8, 3)).design
    assert verify_family(d, "igdd1").ok and len(d.holes.sets[0]) == 12


@pytest.mark.parametrize("fill_last,hole", [(False, 14), (True, 4)])
def test_igdd1_from_gdd(fill_last, hole):
    part = construct_igdd1(2, 7, 2)
    d = C.igdd1_from_gdd(build_gdd(10, 3), part, fill_last).design
    assert verify_family(d, "igdd1").ok and d.uniform() == (2, 17) and len(d.holes.sets[0]) == hole


def test_transversal_hole_fill():
    d = C.fill_transversal_hole(catalog.get("ex4.1"), Design.build(uniform_groups(1, 3), [])).design
    assert verify_mgdp(d, LeaveClass.E3_1).ok
    d = C.fill_transversal_hole(catalog.get("ex4.4"), searched_mgdp(1, 4, LeaveClass.E1)).design
    assert verify_mgdp(d, LeaveClass.E1).ok
    d = C.fill_transversal_hole(igdd2(3, 2, 7), catalog.get("lem5.2-2^7")).design
    assert verify_mgdp(d, LeaveClass.E4_1).ok and d.uniform() == (3, 7)


@pytest.mark.parametrize("g,n,want", [(2, 4, (4, 6)), (2, 6, (4, 6)), (1, 5, (2, 3)), (3, 3, (6, 9))])
def test_igdd2_from_frame(g, n, want):
    d = C.igdd2_from_frame(two_frame(g, n)).design
    assert verify_family(d, "igdd2").ok and sizes(d) == (3 * g,) and len(d.holes.sets[0]) == 2 * g * n


def test_igdd2_from_pbd():
    parts = {k: igdd2(4, 1, k) for k in (3, 4, 5)}
    d = C.igdd2_from_pbd(pbd345(7), parts).design
    assert verify_family(d, "igdd2").ok and d.uniform() == (4, 7)
    d = C.igdd2_from_pbd(PBD(9, sts(9)), {3: igdd2(11, 6, 3)}).design
    assert verify_family(d, "igdd2").ok and d.uniform() == (11, 9)
    single = C.igdd2_from_pbd(PBD(4, ((0, 1, 2, 3),)), {4: igdd2(4, 1, 4)}).design
    assert verify_family(single, "igdd2").ok and len(single.blocks) == len(igdd2(4, 1, 4).blocks)


@pytest.mark.parametrize("g,h,n", [(6, 4, 5), (7, 3, 4)])
def test_inflate_igdd2(g, h, n):
    d = C.inflate_igdd2(igdd2(g, h, n), 2).design
    assert verify_family(d, "igdd2").ok and d.uniform() == (2 * g, n) and len(d.holes.sets[0]) == 2 * h * n


@pytest.mark.parametrize("outer,inner,n", [((6, 4), (4, 1), 5), ((7, 3), (3, 2), 5), ((9, 6), (6, 4), 3)])
def test_fill_igdd2_nested(outer, inner, n):
    d = C.fill_igdd2_nested(igdd2(*outer, n), igdd2(*inner, n)).design
    assert verify_family(d, "igdd2").ok and d.uniform() == (outer[0], n) and len(d.holes.sets[0]) == inner[1] * n


def test_hgdd_chain_for_extended_g():
    hgdd = C.hgdd_from_gdd(build_gdd(5, 3), 4)
    assert verify_family(hgdd.design, "hgdd").ok
    part = igdd2(6, 1, 4)
    for keep, hole in (("w", 6), ("none", 1)):
        d = C.fill_hgdd(hgdd, part, part, keep=keep).design
        assert verify_family(d, "igdd2").ok and d.uniform() == (16, 4) and len(d.holes.sets[0]) == hole * 4


def test_hgdd_chain_13_7():
    hgdd = C.hgdd_from_gdd(construct_igdd1(3, 4, 2), 5)
    d = C.fill_hgdd(hgdd, igdd2(4, 1, 5), keep="w").design
    assert verify_family(d, "igdd2").ok and d.uniform() == (13, 5) and len(d.holes.sets[0]) == 35


def test_gdd_inflation():
    d = C.inflate(k4e_gdd(1, 6), 3, "3^6").design
    assert verify_family(d, "gdd").ok and d.uniform() == (3, 6)


def test_fill_hgdd_needs_the_w_part():
    with pytest.raises(MissingPart):
        C.fill_hgdd(C.hgdd_from_gdd(build_gdd(5, 3), 4), igdd2(6, 1, 4), keep="none")


def test_mismatched_filler_is_rejected():
    with pytest.raises(LayoutMismatch):
        C.fill_fatgroup_hole(catalog.get("lem3.12-2^(8,3)"), construct_mgdp(2, 4, "E4_2"))
    with pytest.raises(LayoutMismatch):
        C.fill_transversal_hole(catalog.get("ex4.1"), Design.build(uniform_groups(1, 4), []))


def test_trace_serialises():
    built = construct_mgdp(6, 3, "E3_1")
    data = built.trace.to_dict()
    assert data["rule"] and built.trace.rules()[0] == data["rule"]
    assert built.trace.render().splitlines()[0].startswith(data["rule"])
