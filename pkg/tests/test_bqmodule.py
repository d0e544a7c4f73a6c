import itertools
import math

import pytest

from surfinv.biquandle import (
    constant_action_biquandle,
    swap_biquandle,
    three_element_biquandle,
)
from surfinv.bqmodule import (
    BiquandleModule,
    DimensionMismatch,
    ModuleAxiomError,
    find_modules,
    module_violations,
    parse_module,
    render_module,
    verify_module,
)
from surfinv.ring import NotAUnit

SWAP = swap_biquandle()
BIQ3 = three_element_biquandle()

# the two reference Z_5 modules over the swap biquandle
EX_Z5_A = ([[2, 3], [4, 1]], [[2, 0], [0, 1]], [[4, 4], [3, 2]])
EX_Z5_B = ([[3, 4], [4, 3]], [[0, 0], [0, 0]], [[3, 1], [1, 3]])

# the two reference Z_3 modules over the 3-element biquandle
M1 = (
    [[2, 2, 2], [2, 2, 2], [1, 1, 1]],
    [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
    [[2, 2, 1], [1, 2, 2], [1, 1, 1]],
)
M2 = (
    [[1, 1, 1], [1, 1, 1], [2, 2, 2]],
    [[1, 2, 2], [2, 1, 1], [1, 2, 2]],
    [[2, 1, 2], [2, 2, 1], [1, 1, 1]],
)


def test_reference_modules_verify():
    verify_module(SWAP, 5, *EX_Z5_A)
    verify_module(SWAP, 5, *EX_Z5_B)
    verify_module(BIQ3, 3, *M1)
    verify_module(BIQ3, 3, *M2)


def test_reference_instance_computations():
    # spot checks of two displayed axiom instances for the Z_5 module
    m = verify_module(SWAP, 5, *EX_Z5_A)
    assert m.t_at(1, 1) == 2 and m.s_at(1, 1) == 2 and m.r_at(1, 1) == 4
    u, o = SWAP.under_op, SWAP.over_op
    x, y, z = 1, 2, 2
    # axiom (iii.vi) instance: t_{2,1} s_{1,2} + s_{2,1} s_{2,2} = s_{2,1} r_{2,2}
    lhs = (m.t_at(u(x, z), u(y, z)) * m.s_at(x, z) + m.s_at(u(x, z), u(y, z)) * m.s_at(y, z)) % 5
    rhs = (m.s_at(u(x, y), o(z, y)) * m.r_at(y, z)) % 5
    assert m.t_at(2, 1) * m.s_at(1, 2) % 5 == 0
    assert lhs == rhs == 0
    # axiom (iii.iii) instance: r_{2,1} s_{2,2} = s_{1,1} r_{1,2} = 3
    lhs3 = (m.r_at(u(x, z), u(y, z)) * m.s_at(y, z)) % 5
    rhs3 = (m.s_at(o(y, x), o(z, x)) * m.r_at(x, z)) % 5
    assert lhs3 == rhs3 == 3


def test_trivial_module_always_valid():
    for X in (SWAP, BIQ3, constant_action_biquandle([1, 2, 3, 4])):
        k = X.size
        ones = [[1] * k for _ in range(k)]
        zeros = [[0] * k for _ in range(k)]
        for n in (2, 3, 5):
            verify_module(X, n, ones, zeros, ones)


def test_violation_reported_with_witness():
    t, s, r = (list(map(list, m)) for m in EX_Z5_A)
    s[0][0] = 3
    bad = module_violations(SWAP, 5, t, s, r)
    assert ("i.i", (1,)) in bad


def test_non_unit_and_dimension_errors():
    t, s, r = (list(map(list, m)) for m in EX_Z5_A)
    t[0][0] = 0
    with pytest.raises(NotAUnit):
        module_violations(SWAP, 5, t, s, r)
    with pytest.raises(DimensionMismatch):
        module_violations(SWAP, 5, [[1]], [[0]], [[1]])


def test_find_modules_contains_references():
    mods5 = find_modules(SWAP, 5)
    assert verify_module(SWAP, 5, *EX_Z5_A) in mods5
    assert verify_module(SWAP, 5, *EX_Z5_B) in mods5
    mods3 = find_modules(BIQ3, 3)
    assert verify_module(BIQ3, 3, *M1) in mods3
    assert verify_module(BIQ3, 3, *M2) in mods3


def test_find_modules_all_verify_and_deterministic():
    mods = find_modules(SWAP, 3)
    for m in mods:
        assert not module_violations(SWAP, 3, m.t, m.s, m.r)
    assert mods == find_modules(SWAP, 3)
    limited = find_modules(SWAP, 3, limit=3)
    assert limited == mods[:3]


def test_find_modules_singleton_matches_closed_form():
    X = constant_action_biquandle([1])
    for n in range(2, 8):
        mods = find_modules(X, n)
        expected = [
            (t, s)
            for t in range(n)
            for s in range(n)
            if math.gcd(t, n) == 1 and math.gcd((t + s) % n, n) == 1
        ]
        assert len(mods) == len(expected)
        got = {(m.t[0][0], m.s[0][0], m.r[0][0]) for m in mods}
        assert got == {(t, s, (t + s) % n) for t, s in expected}


def test_parse_and_render_roundtrip():
    m = verify_module(SWAP, 5, *EX_Z5_A)
    assert parse_module(render_module(m), SWAP) == m
    m1 = verify_module(BIQ3, 3, *M1)
    assert parse_module(render_module(m1), BIQ3) == m1


def test_parse_rejects_non_unit():
    text = "ring 5\nt\n0 3\n4 1\ns\n2 0\n0 1\nr\n4 4\n3 2\n"
    with pytest.raises(NotAUnit):
        parse_module(text, SWAP)
