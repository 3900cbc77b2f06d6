from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import MAX_PACKING
from k4e.errors import KnownException, Unsupported
from k4e.model import EXCEPTIONAL_PAIRS, SHORT_PAIRS, LeaveClass, admissible_leaves, classify_leave, max_blocks, min_leave_size, sort_classes
from k4e.planner import EXCLUSIONS, construct_igdd1, construct_igdd2, construct_mgdp
from k4e.verify import verify_family, verify_mgdp


def test_smallest_example():
    built = construct_mgdp(2, 3, "E2_2")
    assert len(built.design.blocks) == 2 and verify_mgdp(built.design, LeaveClass.E2_2).ok


def test_catalog_route_wins():
    built = construct_mgdp(7, 3, LeaveClass.E2_1)
    assert len(built.design.blocks) == 29
    assert built.trace.rule == "catalog:lem5.13-7^3"


def test_transversal_fill_route():
    built = construct_mgdp(6, 3, LeaveClass.E3_1)
    rules = built.trace.rules()
    assert rules[0] == "Con4.2" and "Lem4.6" in rules


def test_extended_chain_r1():
    built = construct_mgdp(16, 4, LeaveClass.E1)
    assert len(built.design.blocks) == 307
    assert {"Con4.12", "Con4.14", "Con4.2"} <= set(built.trace.rules())


@pytest.mark.parametrize("leave", sort_classes(admissible_leaves(19, 13)))
def test_extended_chain_r4_with_three_edge_leaves(leave):
    # 19^13 has 28158 edges, so its minimum leaves have three edges
    d = construct_mgdp(19, 13, leave).design
    assert verify_mgdp(d, leave).ok and len(d.blocks) == max_blocks(19, 13)


def test_igdd_examples():
    built = construct_igdd1(2, 14, 7)
    assert built.trace.rule == "catalog:lem3.13" and len(built.design.blocks) == 56
    built = construct_igdd2(9, 4, 5)
    assert verify_family(built.design, "igdd2").ok and "Con4.11" in built.trace.rules()
    built = construct_igdd2(11, 6, 9)
    assert verify_family(built.design, "igdd2").ok and "ingredient:sts" in built.trace.rules()


@pytest.mark.parametrize("g,h,n", [(6, 1, 7), (7, 2, 5), (8, 3, 3), (9, 4, 9), (12, 8, 4), (13, 7, 5), (14, 6, 7), (18, 8, 3)])
def test_igdd2_routes(g, h, n):
    d = construct_igdd2(g, h, n).design
    assert verify_family(d, "igdd2").ok and d.uniform() == (g, n) and len(d.holes.sets[0]) == h * n


@pytest.mark.parametrize("g,n,h", [(2, 7, 2), (3, 8, 3), (4, 12, 4), (2, 17, 7), (3, 19, 4), (4, 13, 8)])
def test_igdd1_routes(g, n, h):
    d = construct_igdd1(g, n, h).design
    assert verify_family(d, "igdd1").ok and d.uniform() == (g, n) and len(d.holes.sets[0]) == g * h


@pytest.mark.parametrize("g,n", sorted(MAX_PACKING))
def test_planner_matches_oracle(g, n):
    d_oracle, classes = MAX_PACKING[(g, n)]
    assert {c.tag for c in admissible_leaves(g, n)} == classes
    for tag in classes:
        assert len(construct_mgdp(g, n, tag).design.blocks) == d_oracle


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 14), st.integers(3, 15), st.data())
def test_leave_fidelity(g, n, data):
    leaves = sort_classes(admissible_leaves(g, n))
    if not leaves:
        return
    leave = data.draw(st.sampled_from(leaves))
    d = construct_mgdp(g, n, leave).design
    assert classify_leave(d.leave) is leave and len(d.blocks) == max_blocks(g, n)


def test_exception_table():
    assert set(EXCLUSIONS) == set(EXCEPTIONAL_PAIRS)
    for g, n in EXCEPTIONAL_PAIRS:
        allowed = admissible_leaves(g, n)
        for leave in LeaveClass.of_size(min_leave_size(g, n)):
            if leave in allowed:
                continue
            with pytest.raises(KnownException) as info:
                construct_mgdp(g, n, leave)
            assert "Theorem 1.5" in str(info.value)
            assert info.value.reference == EXCLUSIONS[(g, n)]


def test_lemma_reference_for_2_4():
    with pytest.raises(KnownException) as info:
        construct_mgdp(2, 4, "E4_1")
    assert info.value.reference == "Lemma 2.3"


def test_short_pairs_raise_known_exception():
    for g, n in SHORT_PAIRS:
        with pytest.raises(KnownException):
            construct_mgdp(g, n, LeaveClass.of_size(min_leave_size(g, n))[0])


@pytest.mark.parametrize("g,n,leave", [(2, 4, "E3_1"), (0, 4, "E1"), (2, 2, "E0"), (1, 3, "E4_1")])
def test_malformed_requests(g, n, leave):
    with pytest.raises(ValueError):
        construct_mgdp(g, n, leave)


@pytest.mark.parametrize("g,n,leave", [(17, 5, "E0"), (1, 17, "E1"), (1, 21, "E0")])
def test_unsupported_names_the_ingredient(g, n, leave):
    with pytest.raises(Unsupported) as info:
        construct_mgdp(g, n, leave)
    assert "GDD" in str(info.value) or "search" in str(info.value)
