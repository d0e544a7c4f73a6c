import itertools

import pytest

from surfinv.biquandle import (
    alexander_biquandle,
    swap_biquandle,
    three_element_biquandle,
)
from surfinv.coloring import (
    CrossingRelation,
    SaddleRelation,
    counting_invariant,
    enumerate_colorings,
    relations,
    semiarc_classes,
)
from surfinv.mgd import parse_mgd

LENS = "mgd v1\nV 4 1 3 2\nV 3 1 4 2\n"
KINKS = [
    "mgd v1\nX+ 1 2 2 1\n",
    "mgd v1\nX+ 2 1 1 2\n",
    "mgd v1\nX- 1 1 2 2\n",
    "mgd v1\nX- 2 2 1 1\n",
]
POKE = "mgd v1\nX+ 4 1 2 4\nX- 2 1 3 3\n"

BATTERY = [swap_biquandle(), three_element_biquandle(), alexander_biquandle(5, 2, 3)]


def brute_force_colorings(d, X):
    arcs = d.semiarcs
    cls = semiarc_classes(d)
    found = []
    for values in itertools.product(X.elements, repeat=len(arcs)):
        f = dict(zip(arcs, values))
        if any(f[a] != f[cls[a]] for a in arcs):
            continue
        ok = True
        for node in d.nodes:
            if not hasattr(node, "sign"):
                continue
            a, b, c, dd = node.he
            if node.sign > 0:
                ok = f[c] == X.under_op(f[a], f[dd]) and f[b] == X.over_op(f[dd], f[a])
            else:
                ok = f[a] == X.under_op(f[c], f[dd]) and f[b] == X.over_op(f[dd], f[c])
            if not ok:
                break
        if ok:
            found.append(f)
    return found


def test_free_loop_colorings():
    d = parse_mgd("mgd v1\nO 1\n")
    for X in BATTERY:
        cols = enumerate_colorings(d, X)
        assert len(cols) == X.size
        assert [c[1] for c in cols] == list(X.elements)


def test_relations_shapes():
    d = parse_mgd(POKE)
    rels = relations(d)
    assert all(isinstance(r, CrossingRelation) for r in rels)
    lens_rels = relations(parse_mgd(LENS))
    assert all(isinstance(r, SaddleRelation) for r in lens_rels)


def test_kinked_unknots_count_like_unknot():
    for X in BATTERY:
        for text in KINKS:
            assert counting_invariant(parse_mgd(text), X) == X.size


def test_poked_unknot_counts_like_unknot():
    for X in BATTERY:
        assert counting_invariant(parse_mgd(POKE), X) == X.size


def test_lens_colorings_are_constant():
    for X in BATTERY:
        cols = enumerate_colorings(parse_mgd(LENS), X)
        assert len(cols) == X.size
        for f in cols:
            assert len(set(f.values())) == 1


def test_solver_matches_brute_force():
    diagrams = [LENS, POKE] + KINKS + ["mgd v1\nO 1\nO 2\n"]
    for text in diagrams:
        d = parse_mgd(text)
        for X in BATTERY[:2]:
            got = enumerate_colorings(d, X)
            want = brute_force_colorings(d, X)
            assert len(got) == len(want)
            assert sorted(map(sorted, (g.items() for g in got))) == sorted(
                map(sorted, (w.items() for w in want))
            )


def test_enumeration_is_deterministic_and_sorted():
    d = parse_mgd(POKE)
    X = three_element_biquandle()
    cols = enumerate_colorings(d, X)
    reps = sorted(set(semiarc_classes(d).values()))
    keys = [tuple(f[r] for r in reps) for f in cols]
    assert keys == sorted(keys)
    assert cols == enumerate_colorings(d, X)
