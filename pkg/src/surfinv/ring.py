"""Exact arithmetic and linear algebra over Z/nZ.

Just enough machinery to count solutions of homogeneous linear systems:
row reduction over prime moduli, and Smith normal form of an integer
lift for composite ones.  Entries are plain Python ints, always stored
fully reduced, so equality of matrices is structural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce


class NotAUnit(ValueError):
    """Raised when asked to invert a residue that is not a unit."""


class CompositeModulus(ValueError):
    """Raised by prime-only operations when the modulus is composite."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Modulus:
    """A modulus n >= 2 with its primality cached."""

    n: int
    is_prime: bool = field(init=False)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"modulus must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "is_prime", _is_prime(self.n))

    def __int__(self) -> int:
        return self.n


def _as_n(n) -> int:
    return n.n if isinstance(n, Modulus) else int(n)


def invert(a: int, n) -> int:
    """Inverse of a mod n.  Raises NotAUnit when gcd(a, n) != 1."""
    m = _as_n(n)
    a = a % m
    g, x, _ = _xgcd(a, m)
    if g != 1:
        raise NotAUnit(f"{a} is not a unit mod {m} (gcd {g})")
    return x % m


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    # returns (g, x, y) with a*x + b*y = g
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    return old_r, old_x, old_y


@dataclass(frozen=True)
class ModMatrix:
    """Immutable matrix over Z/nZ with fully reduced entries."""

    entries: tuple[tuple[int, ...], ...]
    modulus: Modulus

    @staticmethod
    def from_rows(rows, n) -> "ModMatrix":
        mod = n if isinstance(n, Modulus) else Modulus(int(n))
        rows = [list(r) for r in rows]
        if rows:
            w = len(rows[0])
            if any(len(r) != w for r in rows):
                raise ValueError("ragged rows")
        ents = tuple(tuple(int(x) % mod.n for x in r) for r in rows)
        return ModMatrix(ents, mod)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def row_list(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def row_reduce(M: ModMatrix) -> tuple[ModMatrix, int]:
    """Reduced row-echelon form over a prime modulus, with the rank.

    Row space is preserved; pivots are normalized to 1 and cleared above
    and below.  Raises CompositeModulus for non-prime moduli (those go
    through smith_normal_form / null_count instead).
    """
    if not M.modulus.is_prime:
        raise CompositeModulus(f"row_reduce needs a prime modulus, got {M.modulus.n}")
    p = M.modulus.n
    a = M.row_list()
    nrows, ncols = M.rows, M.cols
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if a[r][col] % p), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        inv = invert(a[rank][col], p)
        a[rank] = [(inv * x) % p for x in a[rank]]
        for r in range(nrows):
            if r != rank and a[r][col]:
                f = a[r][col]
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[rank])]
        rank += 1
        if rank == nrows:
            break
    return ModMatrix.from_rows(a, M.modulus), rank


def smith_normal_form(rows) -> tuple[int, ...]:
    """Nonzero elementary divisors d_1 | d_2 | ... of an integer matrix.

    Plain fraction-free reduction with arbitrary-precision ints; entries
    can grow, which is fine at the sizes used here.
    """
    a = [list(map(int, r)) for r in rows]
    if not a or not a[0]:
        return ()
    nrows, ncols = len(a), len(a[0])
    divisors = []
    top = 0
    left = 0
    while top < nrows and left < ncols:
        # find the nonzero entry of least magnitude in the remaining block
        best = None
        for i in range(top, nrows):
            for j in range(left, ncols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        a[top], a[bi] = a[bi], a[top]
        for row in a:
            row[left], row[bj] = row[bj], row[left]
        # clear the row and column; restart if a remainder pops up
        while True:
            piv = a[top][left]
            done = True
            for i in range(top + 1, nrows):
                q = a[i][left] // piv
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[top])]
                if a[i][left]:
                    a[top], a[i] = a[i], a[top]
                    done = False
                    break
            if not done:
                continue
            for j in range(left + 1, ncols):
                q = a[top][j] // piv
                if q:
                    for row in a:
                        row[j] -= q * row[left]
                if a[top][j]:
                    for row in a:
                        row[left], row[j] = row[j], row[left]
                    done = False
                    break
            if done:
                break
        # enforce divisibility against the rest of the block
        piv = a[top][left]
        while True:
            bad = None
            for i in range(top + 1, nrows):
                for j in range(left + 1, ncols):
                    if a[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            a[top] = [x + y for x, y in zip(a[top], a[bad])]
            while True:
                piv0 = a[top][left]
                moved = False
                for j in range(left + 1, ncols):
                    q = a[top][j] // piv0
                    if q:
                        for row in a:
                            row[j] -= q * row[left]
                    if a[top][j]:
                        for row in a:
                            row[left], row[j] = row[j], row[left]
                        moved = True
                        break
                if not moved:
                    break
                for i in range(top + 1, nrows):
                    q = a[i][left] // a[top][left]
                    if q:
                        a[i] = [x - q * y for x, y in zip(a[i], a[top])]
            piv = a[top][left]
        divisors.append(abs(piv))
        top += 1
        left += 1
    return tuple(divisors)


def null_count(M: ModMatrix) -> int:
    """Number of vectors v over Z/nZ with M v = 0.

    Prime n: n^(cols - rank).  Composite n: via the Smith normal form of
    an integer lift, the count is n^(cols - r) * prod gcd(d_i, n).
    """
    n = M.modulus.n
    if M.cols == 0:
        return 1
    if M.rows == 0:
        return n ** M.cols
    if M.modulus.is_prime:
        _, rank = row_reduce(M)
        return n ** (M.cols - rank)
    d = smith_normal_form(M.row_list())
    r = len(d)
    return n ** (M.cols - r) * reduce(lambda acc, di: acc * math.gcd(di, n), d, 1)


def brute_force_null_count(M: ModMatrix) -> int:
    """Oracle: count null vectors by enumerating all n^cols candidates."""
    import itertools

    n = M.modulus.n
    count = 0
    for vec in itertools.product(range(n), repeat=M.cols):
        if all(sum(c * v for c, v in zip(row, vec)) % n == 0 for row in M.entries):
            count += 1
    return count
