"""1-factorizations and 2-frames of complete multipartite graphs.

Points use the standard layout: point ``i + n*j`` lies in group ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..errors import Infeasible, SearchExhausted
from ..model import Pair, pair, uniform_groups
from ..verify import Report, ViolationKind, verify_frame

Matching = tuple[Pair, ...]


def round_robin(m: int) -> list[list[Pair]]:
    """1-factorization of K_m (m even): round r pairs r+k with r-k, and infinity with r."""
    if m % 2 or m < 2:
        raise Infeasible(f"K_{m} has no 1-factorization")
    inf = m - 1
    mod = m - 1
    rounds = []
    for r in range(mod):
        rnd = [pair(inf, r)]
        for k in range(1, m // 2):
            rnd.append(pair((r + k) % mod, (r - k) % mod))
        rounds.append(rnd)
    return rounds


def check_factorization(factors, g: int, n: int) -> Report:
    rep = Report()
    groups = uniform_groups(g, n)
    points = g * n
    group_of = {v: i for i, G in enumerate(groups) for v in G}
    seen: set[Pair] = set()
    for k, f in enumerate(factors):
        hit: set[int] = set()
        for u, v in f:
            if group_of[u] == group_of[v]:
                rep.add(ViolationKind.NotMatching, f"factor {k}: {u}-{v} inside a group", edge=(u, v))
            if u in hit or v in hit:
                rep.add(ViolationKind.NotMatching, f"factor {k}: vertex reused at {u}-{v}", edge=(u, v))
            hit.update((u, v))
            e = pair(u, v)
            if e in seen:
                rep.add(ViolationKind.NotPartition, f"pair {e} in two factors", edge=e)
            seen.add(e)
        if len(hit) != points:
            rep.add(ViolationKind.NotSpanning, f"factor {k} covers {len(hit)} of {points} points")
    want = (points * points - n * g * g) // 2
    if rep.ok and len(seen) != want:
        rep.add(ViolationKind.NotPartition, f"{len(seen)} pairs covered, expected {want}")
    return rep


@lru_cache(maxsize=None)
def one_factorization(g: int, n: int) -> tuple[Matching, ...]:
    """(n-1)g perfect matchings partitioning the edges of K_{n(g)}.

    n even: a round-robin factor {a, b} of K_n becomes K_{g,g}, split into g
    shifted matchings. n odd (so g even): each group is halved; the halves
    form K_{2n(g/2)} whose round-robin factorization has one round joining
    the two halves of every group, and that round is dropped.
    """
    if n < 2 or g < 1:
        raise ValueError("need n >= 2 and g >= 1")
    if (g * n) % 2:
        raise Infeasible(f"K_{{{n}({g})}} has an odd number of points")
    factors: list[Matching] = []
    if n % 2 == 0:
        for rnd in round_robin(n):
            for s in range(g):
                factors.append(tuple(sorted(pair(a + n * j, b + n * ((j + s) % g)) for a, b in rnd for j in range(g))))
    else:
        half = g // 2
        rounds = round_robin(2 * n)
        # relabel so that the first round pairs the two halves of each group
        label = {}
        for i, (x, y) in enumerate(rounds[0]):
            label[x], label[y] = 2 * i, 2 * i + 1

        def points_of(part: int) -> list[int]:
            i, side = divmod(part, 2)
            return [i + n * (side * half + j) for j in range(half)]

        for rnd in rounds[1:]:
            for s in range(half):
                m = []
                for x, y in rnd:
                    A, B = points_of(label[x]), points_of(label[y])
                    m.extend(pair(A[j], B[(j + s) % half]) for j in range(half))
                factors.append(tuple(sorted(m)))
    rep = check_factorization(factors, g, n)
    rep.raise_for(f"1-factorization of K_{{{n}({g})}}")
    return tuple(factors)


# ---------------------------------------------------------------------------
# frames


@dataclass(frozen=True)
class Frame:
    """A 2-frame of type g^n: classes[(i, j)] is a perfect matching of V minus G_i."""

    g: int
    n: int
    classes: dict[tuple[int, int], tuple[Pair, ...]]

    @property
    def groups(self) -> tuple[tuple[int, ...], ...]:
        return uniform_groups(self.g, self.n)

    def verify(self) -> Report:
        return verify_frame(self.classes, self.groups)

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "n": self.n,
            "classes": [[i, j, [list(e) for e in self.classes[(i, j)]]] for i, j in sorted(self.classes)],
        }

    @classmethod
    def from_dict(cls, data: dict) -> Frame:
        return cls(data["g"], data["n"], {(i, j): tuple(pair(*e) for e in es) for i, j, es in data["classes"]})


def near_one_factorization(n: int) -> list[list[Pair]]:
    """n odd: class r pairs r+k with r-k (mod n) and misses r."""
    if n % 2 == 0:
        raise Infeasible("near-1-factorizations need odd order")
    return [[pair((r + k) % n, (r - k) % n) for k in range(1, (n + 1) // 2)] for r in range(n)]


def _inflate_frame(classes: dict[tuple[int, int], tuple[Pair, ...]], g0: int, n: int, t: int):
    """Frame of type g0^n to (g0 t)^n: point i + n j becomes i + n (j + g0 x)."""
    out = {}
    for (i, j), pairs in classes.items():
        for s in range(t):
            key = (i, j + g0 * s)
            out[key] = tuple(
                sorted(
                    pair(
                        u % n + n * (u // n + g0 * x),
                        v % n + n * (v // n + g0 * ((x + s) % t)),
                    )
                    for u, v in pairs
                    for x in range(t)
                )
            )
    return out


def _one_rotational_frame(n: int) -> dict[tuple[int, int], tuple[Pair, ...]] | None:
    """2-frame of type 2^n (n even) invariant under Z_{n-1}.

    Points are (a, i) in Z_2 x Z_{n-1} plus infinities inf_0, inf_1, with
    groups {(0, i), (1, i)} and {inf_0, inf_1}. The two classes missing the
    infinite group are the invariant matchings (0, i)(1, i + c) for c = 1
    and c = -1. The remaining pair orbits are split between two base classes
    missing group 0 by exact cover, and the base classes are developed.
    In the standard layout (a, i) is point i + n a and inf_b is n - 1 + n b.
    """
    from ..search import ExactCover

    m = n - 1
    inf = (m, m + n)

    def orbit(u: int, v: int):
        """Canonical name of the Z_m-orbit of the pair {u, v}."""
        if u in inf or v in inf:
            x, y = (u, v) if u in inf else (v, u)
            return ("inf", x // n, y // n)
        (au, iu), (av, iv) = (u // n, u % n), (v // n, v % n)
        if au == av:
            d = (iv - iu) % m
            return ("pure", au, min(d, m - d))
        if au == 1:
            iu, iv = iv, iu
        return ("mixed", (iv - iu) % m)

    fixed = {("mixed", 1), ("mixed", m - 1)}
    pts = [i + n * a for a in range(2) for i in range(1, m)] + list(inf)
    cols: dict = {}
    rows: list[tuple[int, ...]] = []
    labels: list[tuple[int, Pair]] = []
    for b in range(2):
        for x in range(len(pts)):
            for y in range(x + 1, len(pts)):
                u, v = pts[x], pts[y]
                if u % n == v % n:
                    continue
                o = orbit(u, v)
                if o in fixed:
                    continue
                row = tuple(cols.setdefault(key, len(cols)) for key in (o, (b, u), (b, v)))
                rows.append(row)
                labels.append((b, pair(u, v)))
    sol = ExactCover(len(cols), rows, 0, None).solve()
    if sol is None:
        return None

    def shift(p: int, t: int) -> int:
        return p if p in inf else (p % n + t) % m + n * (p // n)

    classes: dict[tuple[int, int], tuple[Pair, ...]] = {}
    for b in range(2):
        base = [labels[r][1] for r in sol if labels[r][0] == b]
        for t in range(m):
            classes[(t, b)] = tuple(sorted(pair(shift(u, t), shift(v, t)) for u, v in base))
    for b, c in enumerate((1, m - 1)):
        classes[(m, b)] = tuple(sorted(pair(i, (i + c) % m + n) for i in range(m)))
    return classes


@lru_cache(maxsize=None)
def two_frame(g: int, n: int) -> Frame:
    """2-frame of type g^n; exists iff g(n-1) is even.

    n odd: inflate the cyclic near-1-factorization of K_n. n even: develop a
    1-rotational frame of type 2^n and inflate by g/2.
    """
    if n < 3 or g < 1:
        raise ValueError("need n >= 3 and g >= 1")
    if g * (n - 1) % 2:
        raise Infeasible(f"no 2-frame of type {g}^{n}: g(n-1) is odd")
    if n % 2:
        base = {(r, 0): tuple(sorted(cls)) for r, cls in enumerate(near_one_factorization(n))}
        classes = _inflate_frame(base, 1, n, g)
    else:
        base = _one_rotational_frame(n)
        if base is None:  # pragma: no cover - found for every even order tried
            raise SearchExhausted(f"no 1-rotational 2-frame of type 2^{n}")
        classes = _inflate_frame(base, 2, n, g // 2)
    frame = Frame(g, n, classes)
    frame.verify().raise_for(f"2-frame of type {g}^{n}")
    return frame
