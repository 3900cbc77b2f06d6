"""Latin squares, finite fields and mutually orthogonal Latin squares."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from ..errors import Infeasible, NoIdempotent


@dataclass(frozen=True)
class LatinSquare:
    rows: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.rows)

    def __call__(self, x: int, y: int) -> int:
        return self.rows[x][y]

    def is_latin(self) -> bool:
        t = self.order
        full = set(range(t))
        return all(len(r) == t and set(r) == full for r in self.rows) and all(
            {self.rows[x][y] for x in range(t)} == full for y in range(t)
        )

    def is_idempotent(self) -> bool:
        return all(self.rows[x][x] == x for x in range(self.order))


def latin_square(t: int) -> LatinSquare:
    """Cyclic square L(x, y) = x + y mod t."""
    if t < 1:
        raise ValueError("order must be positive")
    return LatinSquare(tuple(tuple((x + y) % t for y in range(t)) for x in range(t)))


@lru_cache(maxsize=None)
def idempotent_latin_square(n: int) -> LatinSquare:
    """L(x, x) = x. Odd n: L(x, y) = (x + y)/2 mod n. Even n: exact-cover search."""
    if n < 3:
        raise NoIdempotent(f"no idempotent Latin square of order {n}" if n == 2 else "order must be at least 3")
    if n % 2:
        half = (n + 1) // 2
        sq = LatinSquare(tuple(tuple((x + y) * half % n for y in range(n)) for x in range(n)))
    else:
        sq = _idempotent_search(n)
    assert sq.is_latin() and sq.is_idempotent()
    return sq


def _idempotent_search(n: int) -> LatinSquare:
    """Exact cover over cells, row symbols and column symbols, diagonal fixed."""
    from ..search import ExactCover

    cols: dict[tuple, int] = {}
    rows: list[tuple[int, ...]] = []
    entries: list[tuple[int, int, int]] = []
    for x in range(n):
        for y in range(n):
            for s in range(n):
                if (x == y) != (s == x):
                    continue
                keys = (("cell", x, y), ("row", x, s), ("col", y, s))
                rows.append(tuple(cols.setdefault(k, len(cols)) for k in keys))
                entries.append((x, y, s))
    sol = ExactCover(len(cols), rows, 0, None).solve()
    if sol is None:  # pragma: no cover - exists for every n >= 3
        raise NoIdempotent(f"search found no idempotent square of order {n}")
    grid = [[0] * n for _ in range(n)]
    for r in sol:
        x, y, s = entries[r]
        grid[x][y] = s
    return LatinSquare(tuple(tuple(r) for r in grid))


# ---------------------------------------------------------------------------
# finite fields


def _factor(m: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while m > 1:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1
    return out


def prime_power(q: int) -> tuple[int, int] | None:
    f = _factor(q)
    return f[0] if len(f) == 1 else None


class GF:
    """The field of order p^e; elements are 0..q-1 read as base-p coefficient vectors."""

    def __init__(self, q: int):
        pe = prime_power(q)
        if pe is None:
            raise ValueError(f"{q} is not a prime power")
        self.p, self.e = pe
        self.q = q
        self.modulus = self._irreducible() if self.e > 1 else None
        self._mul = [[self._slow_mul(a, b) for b in range(q)] for a in range(q)]

    def _digits(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.e)]

    def _number(self, coeffs: list[int]) -> int:
        return sum(c * self.p**i for i, c in enumerate(coeffs))

    def _irreducible(self) -> list[int]:
        p, e = self.p, self.e
        for tail in itertools.product(range(p), repeat=e):
            poly = list(tail) + [1]  # monic, lowest degree first
            if poly[0] == 0:
                continue
            if all(sum(c * x**i for i, c in enumerate(poly)) % p for x in range(p)) and self._no_factor(poly):
                return poly
        raise AssertionError("no irreducible polynomial")  # pragma: no cover

    def _no_factor(self, poly: list[int]) -> bool:
        # degree <= 3 needs no more than the root test; degree 4+ checks quadratic factors
        p, e = self.p, self.e
        if e <= 3:
            return True
        for a, b in itertools.product(range(p), repeat=2):
            if self._polymod(poly, [b, a, 1]) == [0] * 2:
                return False
        return True

    def _polymod(self, num: list[int], den: list[int]) -> list[int]:
        num = num[:]
        p = self.p
        while len(num) >= len(den):
            coef = num[-1] % p
            shift = len(num) - len(den)
            for i, c in enumerate(den):
                num[shift + i] = (num[shift + i] - coef * c) % p
            num.pop()
        return (num + [0] * len(den))[: len(den) - 1]

    def _slow_mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % self.p
        return self._number(self._polymod(prod, self.modulus))

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return self._number([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]


def mols(m: int, k: int) -> list[LatinSquare]:
    """k mutually orthogonal Latin squares of order m (fields, then MacNeish products)."""
    if k < 1:
        return []
    pe = prime_power(m)
    if pe is not None:
        if k > m - 1:
            raise Infeasible(f"field construction gives only {m - 1} MOLS of order {m}")
        F = GF(m)
        return [
            LatinSquare(tuple(tuple(F.add(F.mul(a, x), y) for y in range(m)) for x in range(m)))
            for a in range(1, k + 1)
        ]
    parts = [p**e for p, e in _factor(m)]
    if min(parts) - 1 < k:
        raise Infeasible(f"MacNeish bound gives fewer than {k} MOLS of order {m}")
    squares = mols(parts[0], k)
    size = parts[0]
    for q in parts[1:]:
        other = mols(q, k)
        squares = [_product(a, b, size, q) for a, b in zip(squares, other)]
        size *= q
    return squares


def _product(a: LatinSquare, b: LatinSquare, m1: int, m2: int) -> LatinSquare:
    m = m1 * m2
    rows = []
    for x in range(m):
        x1, x2 = divmod(x, m2)
        rows.append(tuple(a(x1, y // m2) * m2 + b(x2, y % m2) for y in range(m)))
    return LatinSquare(tuple(rows))


def mols_count(m: int) -> int:
    """Number of MOLS of order m available from :func:`mols`."""
    if m < 2:
        return 0
    pe = prime_power(m)
    if pe is not None:
        return m - 1
    return min(p**e for p, e in _factor(m)) - 1


def transversal_design(k: int, m: int) -> list[tuple[int, ...]]:
    """TD(k, m) on points i*m + x (group i, coordinate x)."""
    squares = mols(m, k - 2)
    blocks = []
    for x in range(m):
        for y in range(m):
            row = [x, y] + [L(x, y) for L in squares]
            blocks.append(tuple(i * m + v for i, v in enumerate(row)))
    return blocks
