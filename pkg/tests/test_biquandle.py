import itertools

import pytest

from surfinv.biquandle import (
    BiquandleAxiomError,
    MalformedTable,
    NotAPermutation,
    alexander_biquandle,
    biquandle_violations,
    constant_action_biquandle,
    parse_biquandle,
    render_biquandle,
    swap_biquandle,
    three_element_biquandle,
    verify_biquandle,
)
from surfinv.mgd import ParseError
from surfinv.ring import NotAUnit

SWAP = ((2, 2), (1, 1))


def test_swap_tables_are_valid():
    X = verify_biquandle(SWAP, SWAP)
    assert X.size == 2
    assert X.under_op(1, 2) == 2 and X.over_op(2, 2) == 1


def test_trivial_biquandle_any_size():
    for n in range(1, 5):
        table = tuple(tuple(x for _ in range(n)) for x in range(1, n + 1))
        X = verify_biquandle(table, table)
        assert all(X.under_op(x, y) == x for x in X.elements for y in X.elements)


def test_swap_under_identity_over_is_invalid():
    ident = ((1, 1), (2, 2))
    violations = biquandle_violations(SWAP, ident)
    assert ("i", (1,)) in violations and ("i", (2,)) in violations


def test_malformed_tables():
    with pytest.raises(MalformedTable):
        biquandle_violations(((1, 2),), ((1, 2),))
    with pytest.raises(MalformedTable):
        biquandle_violations(((2, 2), (1, 3)), SWAP)


def test_three_element_biquandle_valid():
    X = three_element_biquandle()
    assert X.over_op(2, 3) == 2
    assert X.under_op(3, 1) == 3


def test_constant_action_all_small_permutations():
    for n in range(1, 5):
        for sigma in itertools.permutations(range(1, n + 1)):
            X = constant_action_biquandle(sigma)
            assert X.under == X.over


def test_constant_action_rejects_non_permutation():
    with pytest.raises(NotAPermutation):
        constant_action_biquandle([1, 1])


def test_alexander_biquandle_examples():
    X = alexander_biquandle(5, 2, 3)
    assert X.size == 5
    trivial = alexander_biquandle(3, 1, 1)
    assert all(trivial.under_op(x, y) == x for x in trivial.elements for y in trivial.elements)
    with pytest.raises(NotAUnit):
        alexander_biquandle(4, 2, 1)


def test_alexander_biquandle_exhaustive_units():
    import math

    for n in range(2, 8):
        units = [u for u in range(1, n) if math.gcd(u, n) == 1]
        for t in units:
            for s in units:
                alexander_biquandle(n, t, s)  # verify_biquandle runs inside


def test_parse_examples():
    X = parse_biquandle("size 2\nunder\n2 2\n1 1\nover\n2 2\n1 1\n")
    assert X == swap_biquandle()
    single = parse_biquandle("size 1\nunder\n1\nover\n1\n")
    assert single.size == 1
    with pytest.raises(ParseError):
        parse_biquandle("size 2\nunder\n2 2\n1 3\nover\n2 2\n1 1\n")


def test_parse_comments_and_roundtrip():
    X = three_element_biquandle()
    text = render_biquandle(X)
    assert parse_biquandle("# a comment\n" + text) == X


def test_verify_raises_with_all_violations():
    with pytest.raises(BiquandleAxiomError) as exc:
        verify_biquandle(SWAP, ((1, 1), (2, 2)))
    assert len(exc.value.violations) >= 2
