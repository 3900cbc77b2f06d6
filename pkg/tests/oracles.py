"""Frozen reference values, computed once by independent means.

MAX_PACKING holds D(g^n) and the set of minimum leave classes realised for
every (g, n) with g n <= 10. The values were obtained by exhaustive search
over all leave placements (a separate brute-force run, not the planner) and
agree with the counting bound floor(n(n-1)g^2 / 10) except for 1^5, whose
maximum packing has a single block.
"""

from __future__ import annotations

MAX_PACKING: dict[tuple[int, int], tuple[int, frozenset[str]]] = {
    (1, 3): (0, frozenset({"E3_1"})),
    (1, 4): (1, frozenset({"E1"})),
    (1, 5): (1, frozenset()),
    (1, 6): (3, frozenset({"E0"})),
    (1, 7): (3, frozenset()),
    (1, 8): (5, frozenset({"E3_3", "E3_4", "E3_5"})),
    (1, 9): (6, frozenset()),
    (1, 10): (9, frozenset({"E0"})),
    (2, 3): (2, frozenset({"E2_2"})),
    (2, 4): (4, frozenset({f"E4_{j}" for j in range(2, 12)})),
    (2, 5): (8, frozenset({"E0"})),
    (3, 3): (5, frozenset({"E2_2"})),
}

# Designs whose leaves are one block short of the counting bound.
SHORT = {(1, 5), (1, 7), (1, 9)}

# Block counts stated alongside three catalog designs.
CATALOG_COUNTS = {"lem3.13": 56, "lem3.14": 605, "lem4.17-(4,1)^8": 84}

# Excluded leaves and the result that rules each of them out.
NONEXISTENCE = [
    (2, 3, "E2_1", "Lemma 2.1"),
    (3, 3, "E2_1", "Lemma 2.2"),
    (2, 4, "E4_1", "Lemma 2.3"),
    (4, 3, "E3_2", "Lemma 2.4"),
    (4, 3, "E3_3", "Lemma 2.4"),
    (4, 3, "E3_4", "Lemma 2.4"),
    (4, 3, "E3_5", "Lemma 2.4"),
]

EXTENDED = [(16, 4, "E1"), (17, 8, "E2_1"), (18, 7, "E4_11"), (19, 13, "E2_2")]
