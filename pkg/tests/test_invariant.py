import pytest

from surfinv.biquandle import swap_biquandle, three_element_biquandle
from surfinv.bqmodule import verify_module
from surfinv.coloring import enumerate_colorings
from surfinv.invariant import (
    InvariantPolynomial,
    TooLarge,
    bead_count,
    bead_system,
    brute_force_bead_count,
    module_polynomial,
)
from surfinv.mgd import parse_mgd

SWAP = swap_biquandle()
BIQ3 = three_element_biquandle()

EX42 = verify_module(SWAP, 5, [[2, 3], [4, 1]], [[2, 0], [0, 1]], [[4, 4], [3, 2]])
MOD2 = verify_module(SWAP, 5, [[3, 4], [4, 3]], [[0, 0], [0, 0]], [[3, 1], [1, 3]])
M1 = verify_module(
    BIQ3, 3,
    [[2, 2, 2], [2, 2, 2], [1, 1, 1]],
    [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
    [[2, 2, 1], [1, 2, 2], [1, 1, 1]],
)

LOOP = "mgd v1\nO 1\n"
LENS = "mgd v1\nV 4 1 3 2\nV 3 1 4 2\n"
KINK = "mgd v1\nX+ 1 2 2 1\n"
POKE = "mgd v1\nX+ 4 1 2 4\nX- 2 1 3 3\n"


def test_free_loop_bead_count():
    d = parse_mgd(LOOP)
    for m in (EX42, MOD2, M1):
        for f in enumerate_colorings(d, m.base):
            assert bead_count(d, f, m) == m.modulus.n


def test_free_loop_system_shape():
    d = parse_mgd(LOOP)
    f = enumerate_colorings(d, EX42.base)[0]
    M = bead_system(d, f, EX42)
    assert M.cols == 1


def test_lens_beads_are_free():
    # saddles merge beads without adding relations
    d = parse_mgd(LENS)
    assert module_polynomial(d, SWAP, EX42).render() == "2u^5"
    assert module_polynomial(d, BIQ3, M1).render() == "3u^3"


def test_kink_and_poke_match_unknot():
    base = {m: module_polynomial(parse_mgd(LOOP), m.base, m).render() for m in (EX42, MOD2, M1)}
    for text in (KINK, POKE):
        d = parse_mgd(text)
        for m in (EX42, MOD2, M1):
            assert module_polynomial(d, m.base, m).render() == base[m]


def test_oracle_agreement():
    for text in (KINK, POKE, LENS):
        d = parse_mgd(text)
        for m in (EX42, MOD2, M1):
            for f in enumerate_colorings(d, m.base):
                assert bead_count(d, f, m) == brute_force_bead_count(d, f, m)


def test_oracle_cap():
    d = parse_mgd(LOOP)
    f = enumerate_colorings(d, SWAP)[0]
    with pytest.raises(TooLarge):
        brute_force_bead_count(d, f, EX42, cap=1)


def test_trivial_module_collapse():
    # with t = r = 1, s = 0 every bead count is n^(number of classes)
    for X, n in ((SWAP, 5), (BIQ3, 3)):
        k = X.size
        triv = verify_module(X, n, [[1] * k] * k, [[0] * k] * k, [[1] * k] * k)
        for text in (KINK, POKE, LENS):
            d = parse_mgd(text)
            poly = module_polynomial(d, X, triv)
            assert len(poly.terms) == 1  # all exponents equal


def test_total_multiplicity_is_counting_invariant():
    for text in (KINK, POKE, LENS):
        d = parse_mgd(text)
        for m in (EX42, MOD2, M1):
            poly = module_polynomial(d, m.base, m)
            assert poly.total_multiplicity == len(enumerate_colorings(d, m.base))


def test_polynomial_rendering():
    p = InvariantPolynomial(((1, 2), (25, 2)))
    assert p.render() == "2u + 2u^25"
    assert InvariantPolynomial(((0, 3),)).render() == "3"
    assert InvariantPolynomial(((5, 1),)).render() == "u^5"
    assert InvariantPolynomial(()).render() == "0"
    assert InvariantPolynomial.parse("2u + 2u^25") == p
    assert p.to_json() == [[1, 2], [25, 2]]


def test_threads_do_not_change_results():
    d = parse_mgd(POKE)
    base = module_polynomial(d, SWAP, EX42)
    for k in (1, 2, 8):
        assert module_polynomial(d, SWAP, EX42, threads=k) == base
