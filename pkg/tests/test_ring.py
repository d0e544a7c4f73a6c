import math
import random

import pytest

from surfinv.ring import (
    CompositeModulus,
    ModMatrix,
    Modulus,
    NotAUnit,
    brute_force_null_count,
    invert,
    null_count,
    row_reduce,
    smith_normal_form,
)

# 8x7 coloring matrix of the worked surface-link example over Z_5.
WORKED_MATRIX = [
    [4, 0, 2, 2, 0, 0, 0],
    [0, 4, 4, 0, 0, 0, 0],
    [0, 0, 2, 2, 4, 0, 0],
    [4, 0, 0, 4, 0, 0, 0],
    [0, 0, 0, 0, 4, 4, 0],
    [4, 0, 0, 0, 0, 0, 3],
    [4, 0, 0, 0, 0, 0, 3],
    [0, 4, 0, 0, 0, 4, 0],
]

WORKED_RREF = [
    [1, 0, 0, 0, 0, 0, 2],
    [0, 1, 0, 0, 0, 0, 2],
    [0, 0, 1, 0, 0, 0, 3],
    [0, 0, 0, 1, 0, 0, 3],
    [0, 0, 0, 0, 1, 0, 2],
    [0, 0, 0, 0, 0, 1, 3],
    [0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0],
]


def test_modulus_primality():
    assert Modulus(5).is_prime
    assert Modulus(2).is_prime
    assert not Modulus(4).is_prime
    assert not Modulus(9).is_prime
    with pytest.raises(ValueError):
        Modulus(1)


def test_invert_examples():
    assert invert(3, 5) == 2
    for n in (2, 3, 5, 7, 9):
        assert invert(1, n) == 1
    with pytest.raises(NotAUnit):
        invert(2, 4)


def test_invert_brute_force_agreement():
    for n in range(2, 12):
        for a in range(n):
            sols = [b for b in range(n) if (a * b) % n == 1]
            if math.gcd(a, n) == 1:
                assert sols == [invert(a, n)]
            else:
                with pytest.raises(NotAUnit):
                    invert(a, n)


def test_row_reduce_worked_matrix():
    M = ModMatrix.from_rows(WORKED_MATRIX, 5)
    red, rank = row_reduce(M)
    assert rank == 6
    assert red.row_list() == WORKED_RREF


def test_row_reduce_trivial_cases():
    zero, rank = row_reduce(ModMatrix.from_rows([[0, 0, 0], [0, 0, 0]], 3))
    assert rank == 0
    ident = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    red, rank = row_reduce(ModMatrix.from_rows(ident, 5))
    assert rank == 3 and red.row_list() == ident


def test_row_reduce_idempotent():
    rng = random.Random(7)
    for _ in range(50):
        p = rng.choice([2, 3, 5, 7])
        rows = [[rng.randrange(p) for _ in range(rng.randrange(1, 6))]]
        rows = [rows[0]] + [[rng.randrange(p) for _ in rows[0]] for _ in range(rng.randrange(1, 5))]
        red, rank = row_reduce(ModMatrix.from_rows(rows, p))
        red2, rank2 = row_reduce(red)
        assert red2.entries == red.entries and rank2 == rank


def test_row_reduce_rejects_composite():
    with pytest.raises(CompositeModulus):
        row_reduce(ModMatrix.from_rows([[1]], 4))


def test_null_count_examples():
    assert null_count(ModMatrix.from_rows(WORKED_MATRIX, 5)) == 5
    assert null_count(ModMatrix.from_rows([[0, 0], [0, 0]], 3)) == 9
    assert null_count(ModMatrix.from_rows([[2]], 4)) == 2


def test_null_count_prime_rank_identity():
    rng = random.Random(11)
    for _ in range(40):
        p = rng.choice([2, 3, 5])
        r, c = rng.randrange(1, 5), rng.randrange(1, 5)
        M = ModMatrix.from_rows([[rng.randrange(p) for _ in range(c)] for _ in range(r)], p)
        _, rank = row_reduce(M)
        assert null_count(M) == p ** (c - rank)


def test_null_count_matches_brute_force():
    rng = random.Random(3)
    for _ in range(120):
        n = rng.choice([2, 3, 4, 5])
        r, c = rng.randrange(0, 4), rng.randrange(0, 5)
        M = ModMatrix.from_rows([[rng.randrange(n) for _ in range(c)] for _ in range(r)], n)
        assert null_count(M) == brute_force_null_count(M)


def test_snf_examples():
    assert smith_normal_form([[2, 0], [0, 3]]) == (1, 6)
    for k in range(1, 5):
        ident = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
        assert smith_normal_form(ident) == (1,) * k
    assert smith_normal_form([[0, 0], [0, 0]]) == ()
    assert smith_normal_form([]) == ()


def test_snf_divisibility_chain_random():
    rng = random.Random(23)
    for _ in range(1000):
        r, c = rng.randrange(1, 5), rng.randrange(1, 5)
        rows = [[rng.randrange(-6, 7) for _ in range(c)] for _ in range(r)]
        d = smith_normal_form(rows)
        assert all(x > 0 for x in d)
        for a, b in zip(d, d[1:]):
            assert b % a == 0


def test_snf_preserves_determinant_magnitude():
    rng = random.Random(5)
    for _ in range(60):
        k = rng.randrange(1, 4)
        rows = [[rng.randrange(-4, 5) for _ in range(k)] for _ in range(k)]
        det = _det(rows)
        d = smith_normal_form(rows)
        prod = 1
        for x in d:
            prod *= x
        if det == 0:
            assert len(d) < k
        else:
            assert prod == abs(det)


def _det(rows):
    k = len(rows)
    if k == 1:
        return rows[0][0]
    total = 0
    for j in range(k):
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * _det(minor)
    return total
