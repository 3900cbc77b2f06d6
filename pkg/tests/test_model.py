from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k4e.errors import InvalidBlock, UnclassifiableLeave
from k4e.model import (
    SHORT_PAIRS,
    Block,
    Design,
    HolePattern,
    LeaveClass,
    admissible_leaves,
    classify_leave,
    edge_count,
    leave_embeds,
    max_blocks,
    min_leave_size,
    pair,
    sort_classes,
    uniform_groups,
)


def test_block_edges_and_canonical_form():
    b = Block.of([5, 1, 9, 3])
    assert b.as_list() == [1, 5, 3, 9]
    assert set(b.edges()) == {(1, 5), (1, 3), (1, 9), (3, 5), (5, 9)}
    assert str(b) == "[1, 5, 3 - 9]"
    with pytest.raises(InvalidBlock):
        Block(1, 1, 2, 3)


def test_twenty_leave_classes_with_distinct_shapes():
    assert len(LeaveClass) == 20
    assert [len(LeaveClass.of_size(k)) for k in range(5)] == [1, 1, 2, 5, 11]
    for c in LeaveClass:
        assert classify_leave(c.edges) is c


def test_paper_names_and_parsing():
    assert LeaveClass.E4_2.paper_name == "E_{4,2}"
    assert LeaveClass.E1.paper_name == "E_{1}"
    assert LeaveClass.parse("E_{3,4}") is LeaveClass.E3_4
    assert LeaveClass.parse("E0") is LeaveClass.E0
    with pytest.raises(ValueError):
        LeaveClass.parse("E5_1")


def test_classify_rejects_large_or_looped_leaves():
    with pytest.raises(UnclassifiableLeave):
        classify_leave([(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)])
    with pytest.raises(UnclassifiableLeave):
        classify_leave([(2, 2)])


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(list(LeaveClass)), st.permutations(range(8)))
def test_classification_is_invariant_under_relabelling(cls, perm):
    edges = [pair(perm[u], perm[v]) for u, v in cls.edges]
    assert classify_leave(edges) is cls


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 40), st.integers(3, 40))
def test_counting_identities(g, n):
    e = edge_count(g, n)
    size = min_leave_size(g, n)
    assert 0 <= size < 5 and (e - size) % 5 == 0
    d = max_blocks(g, n)
    assert d == (e - size) // 5 - ((g, n) in SHORT_PAIRS)
    leaves = admissible_leaves(g, n)
    assert all(c.size == size and leave_embeds(c, g, n) for c in leaves)
    assert bool(leaves) == ((g, n) not in SHORT_PAIRS)


@pytest.mark.parametrize(
    "g,n,tags",
    [
        (3, 4, [f"E4_{j}" for j in range(1, 12)]),
        (1, 8, ["E3_3", "E3_4", "E3_5"]),
        (2, 3, ["E2_2"]),
        (3, 3, ["E2_2"]),
        (4, 3, ["E3_1"]),
        (2, 4, [f"E4_{j}" for j in range(2, 12)]),
        (1, 5, []),
        (5, 7, ["E0"]),
    ],
)
def test_admissible_leaves_table(g, n, tags):
    assert [c.tag for c in sort_classes(admissible_leaves(g, n))] == tags


def test_short_pairs_flagged():
    for g, n in SHORT_PAIRS:
        assert admissible_leaves(g, n).exceptional


def test_embeddability_uses_group_capacity():
    # a triangle needs three groups; a 3-star needs its leaves in one group of size >= 3
    assert not leave_embeds(LeaveClass.E3_1, 4, 2)
    assert leave_embeds(LeaveClass.E3_1, 1, 3)
    assert leave_embeds(LeaveClass.E3_2, 3, 2)
    assert not leave_embeds(LeaveClass.E3_2, 2, 2)


def test_design_json_round_trip():
    groups = uniform_groups(2, 3)
    d = Design.build(groups, [Block.of([0, 1, 2, 5]), Block.of([3, 4, 2, 5])])
    data = d.to_dict(LeaveClass.E2_2)
    assert data["leave_class"] == {"tag": "E2_2", "paper_name": "E_{2,2}"}
    again = Design.from_json(d.to_json())
    assert again.blocks == d.blocks and again.groups == d.groups and again.leave == d.leave


def test_from_dict_rejects_bad_layouts():
    with pytest.raises(ValueError):
        Design.from_dict({"version": 1, "groups": [[0, 2]], "blocks": []})
    with pytest.raises(ValueError):
        Design.from_dict({"version": 9, "groups": [[0]], "blocks": []})
    with pytest.raises(ValueError):
        Design.from_dict({"version": 1, "groups": [[0], [1], [2], [3]], "blocks": [[0, 1, 2]]})


def test_hole_patterns_validate():
    with pytest.raises(ValueError):
        HolePattern("odd")
    with pytest.raises(ValueError):
        HolePattern.multi([[0, 1], [1, 2]])
    d = Design.build(uniform_groups(1, 4), [], HolePattern.fat([0, 1]))
    assert not d.is_allowed(0, 1) and d.is_allowed(0, 2)
    assert len(d.allowed_edges) == 5


def test_allowed_edges_count_matches_formula():
    for g, n in itertools.product(range(1, 4), range(3, 6)):
        d = Design.build(uniform_groups(g, n), [])
        assert len(d.allowed_edges) == edge_count(g, n)
