from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k4e.errors import BudgetExceeded, Infeasible, Timeout
from k4e.ingredients.gdd import _within_group_shift
from k4e.model import Design, LeaveClass, admissible_leaves, max_blocks, pair, uniform_groups
from k4e.search import (
    Exact,
    ExactCover,
    PackingInstance,
    all_placements,
    candidate_blocks,
    hill_climb,
    leave_placements,
    max_packing,
    orbit_search,
    prove_nonexistence,
    search_random,
    solve_exact,
)
from k4e.verify import verify_exact, verify_mgdp, verify_packing


def test_exact_cover_small():
    # Knuth's example: rows 0, 3, 4 are the unique solution
    rows = [(2, 4, 5), (0, 3, 6), (1, 2, 5), (0, 3), (1, 6), (3, 4, 6)]
    sol = ExactCover(7, rows, 0, None).solve()
    assert sorted(sol) == [0, 3, 4]
    assert ExactCover(3, [(0, 1), (1, 2)], 0, None).solve() is None
    # one slack column may stay uncovered
    assert ExactCover(3, [(0, 1), (1, 2)], 1, None).solve() is not None


def test_exact_cover_budget():
    # 13 columns cannot be split into triples, so the tree is exhausted only slowly
    rows = [tuple(c) for c in itertools.combinations(range(13), 3)]
    with pytest.raises(BudgetExceeded):
        ExactCover(13, rows, 0, node_budget=50).solve()


@settings(max_examples=50, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 9), st.integers(0, 9)).map(lambda t: pair(*t) if t[0] != t[1] else None), max_size=25))
def test_candidate_blocks_use_only_allowed_edges(allowed):
    allowed = {e for e in allowed if e is not None}
    for b in candidate_blocks(10, allowed):
        assert set(b.edges()) <= allowed


def _orbits_by_brute_force(g: int, n: int, leave: LeaveClass) -> int:
    """Orbits of leave embeddings under the full automorphism group of K_{n(g)}."""
    groups = uniform_groups(g, n)
    autos = []
    for gp in itertools.permutations(range(n)):
        for inner in itertools.product(list(itertools.permutations(range(g))), repeat=n):
            m = [0] * (g * n)
            for i, G in enumerate(groups):
                for j, v in enumerate(G):
                    m[v] = groups[gp[i]][inner[i][j]]
            autos.append(m)
    seen: set = set()
    orbits = 0
    for P in all_placements(g, n, leave):
        if P in seen:
            continue
        orbits += 1
        for m in autos:
            seen.add(frozenset(pair(m[u], m[v]) for u, v in P))
    return orbits


@pytest.mark.parametrize(
    "g,n,tag",
    [(2, 3, "E2_1"), (2, 3, "E2_2"), (3, 3, "E2_1"), (2, 4, "E4_1"), (2, 4, "E4_7"), (1, 6, "E3_5"), (2, 4, "E3_3"), (1, 5, "E4_11")],
)
def test_placement_orbits_are_sound_and_complete(g, n, tag):
    leave = LeaveClass(tag)
    reps = leave_placements(g, n, leave)
    every = all_placements(g, n, leave)
    assert all(P in every for P in reps)
    assert len(reps) == _orbits_by_brute_force(g, n, leave)


def test_nonexistence_certificate_and_witness():
    cert = prove_nonexistence(2, 3, LeaveClass.E2_1)
    assert cert.conclusion == "nonexistent" and cert.witness is None
    data = cert.to_dict()
    assert data["instance"] == {"type": "2^3", "leave": "E2_1", "blocks": 2}
    assert {o["result"] for o in data["orbits"]} == {"infeasible"}
    found = prove_nonexistence(2, 3, LeaveClass.E2_2)
    assert found.conclusion == "exists" and verify_mgdp(found.witness, LeaveClass.E2_2).ok
    with pytest.raises(ValueError):
        prove_nonexistence(2, 3, LeaveClass.E1)


def test_nonexistence_parallel_matches_serial():
    a = prove_nonexistence(4, 3, LeaveClass.E3_2)
    b = prove_nonexistence(4, 3, LeaveClass.E3_2, jobs=2)
    assert a.to_dict() == b.to_dict()


def test_nonexistence_budget():
    with pytest.raises(BudgetExceeded):
        prove_nonexistence(4, 3, LeaveClass.E3_3, node_budget=10)


@pytest.mark.parametrize("g,n", [(1, 4), (1, 5), (2, 3), (1, 7)])
def test_max_packing(g, n):
    res = max_packing(g, n)
    assert res.d == max_blocks(g, n)
    assert res.classes == admissible_leaves(g, n)
    for cls, d in res.witnesses.items():
        assert verify_mgdp(d, cls).ok
    if not res.classes:
        assert verify_packing(res.raw_witness).ok and len(res.raw_witness.blocks) == res.d


def test_solve_exact_variants():
    d = solve_exact(PackingInstance.exact(uniform_groups(1, 6)))
    assert verify_exact(d).ok
    inst = PackingInstance.mgdp(2, 3, Exact(frozenset({(0, 1), (1, 2)})))
    with pytest.raises(Infeasible):
        solve_exact(inst)
    d = solve_exact(PackingInstance.mgdp(3, 4, LeaveClass.E4_9))
    assert verify_mgdp(d, LeaveClass.E4_9).ok


def test_randomised_and_local_search():
    inst = PackingInstance.exact(uniform_groups(2, 5))
    assert verify_exact(search_random(inst, seed=3)).ok
    for g, n in [(3, 3), (1, 8)]:
        d = hill_climb(PackingInstance.mgdp(g, n), seed=1)
        assert verify_packing(d).ok and len(d.blocks) == max_blocks(g, n)
    with pytest.raises(Timeout):
        hill_climb(PackingInstance.mgdp(2, 6), seed=1, time_budget=0.2)


def test_orbit_search_finds_cyclic_design():
    shell = Design.build(uniform_groups(3, 5), ())
    d = orbit_search(shell, _within_group_shift(3, 5), seed=1)
    assert verify_exact(d).ok
    with pytest.raises(ValueError):
        orbit_search(shell, [1, 0] + list(range(2, 15)))
