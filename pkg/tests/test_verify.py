from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import KINDS, mutate
from k4e import catalog
from k4e.errors import VerificationError
from k4e.model import Block, Design, HolePattern, LeaveClass, uniform_groups
from k4e.verify import (
    ViolationKind,
    verify_exact,
    verify_family,
    verify_frame,
    verify_mgdp,
    verify_pair_coverage,
    verify_resolvable,
)

EX16 = "ex1.6"


def test_example_design_verifies():
    d = catalog.get(EX16)
    assert verify_mgdp(d, LeaveClass.E2_2).ok
    rep = verify_mgdp(d, LeaveClass.E2_1)
    assert rep.kinds == {ViolationKind.WrongLeaveClass}
    with pytest.raises(VerificationError):
        rep.raise_for()


def test_wrong_family_and_hole_shape():
    d = catalog.get("lem3.13")
    assert verify_family(d, "igdd1").ok
    assert ViolationKind.WrongFamily in verify_family(d, "igdd2").kinds
    assert ViolationKind.WrongFamily in verify_mgdp(d, None).kinds


def test_uneven_transversal_hole_is_reported():
    d = Design.build(uniform_groups(2, 3), [], HolePattern.transversal([0, 1, 3]))
    assert ViolationKind.BadHole in verify_family(d, "igdd2").kinds


def test_exact_design_with_uncovered_edges():
    d = Design.build(uniform_groups(1, 4), [Block.of([0, 1, 2, 3])])
    assert verify_exact(d).kinds == {ViolationKind.NonEmptyLeave}


def test_report_summary():
    d = catalog.get(EX16)
    bad = Design(d.groups, d.blocks + d.blocks, d.holes, d.descriptor)
    rep = verify_mgdp(bad, None)
    assert not rep.ok and rep.count == 10
    assert rep.summary().startswith("DuplicateEdge") and "(+9 more)" in rep.summary()


def test_pair_coverage_and_resolvability():
    fano = [(0, 1, 3), (1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 0), (5, 6, 1), (6, 0, 2)]
    assert verify_pair_coverage(fano, 7).ok
    assert ViolationKind.NonEmptyLeave in verify_pair_coverage(fano[:-1], 7).kinds
    assert ViolationKind.DuplicateEdge in verify_pair_coverage(fano + [(0, 1, 2)], 7).kinds
    assert verify_resolvable([[(0, 1), (2, 3)], [(0, 2), (1, 3)]], range(4)).ok
    assert ViolationKind.NotParallel in verify_resolvable([[(0, 1), (1, 3)]], range(4)).kinds


def test_frame_checker_rejects_a_bad_class():
    groups = uniform_groups(1, 3)
    assert verify_frame({(0, 0): ((1, 2),), (1, 0): ((0, 2),), (2, 0): ((0, 1),)}, groups).ok
    assert not verify_frame({(0, 0): ((0, 1),), (1, 0): ((0, 2),), (2, 0): ((1, 2),)}, groups).ok


SUBJECTS = ["ex1.6", "ex4.3", "ex4.4", "lem3.13", "lem4.18-(7,3)^3", "lem5.7-3^4-E4_5", "lem3.12-2^(8,3)"]


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(SUBJECTS), st.sampled_from(KINDS), st.integers(0, 10**6))
def test_single_mutations_are_rejected_with_the_right_variant(cid, kind, seed):
    e = catalog.entry(cid)
    res = mutate(catalog.get(cid), kind, random.Random(seed), exact=e.family != "mgdp")
    if res is None:
        return
    bad, want = res
    rep = verify_family(bad, e.family, e.leave)
    assert want in rep.kinds
