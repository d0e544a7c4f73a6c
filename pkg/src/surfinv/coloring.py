"""Biquandle colorings of marked graph diagrams.

A coloring assigns a biquandle element to every semiarc so that at each
crossing the sideways crossing relations hold, and at each marked vertex
all four legs agree.  With (a, b, c, d) the half-edges in record order:

* ``X+``:  f(c) = f(a) under f(d),   f(b) = f(d) over f(a)
* ``X-``:  f(a) = f(c) under f(d),   f(b) = f(d) over f(c)

One record type is the other read against the orientation, which is
what makes the count blind to the oriented kink and poke moves for
every biquandle (the Alexander family is the discriminating case).
Saddle legs are merged before the search, so enumeration runs over one
variable per merged class.
"""

from __future__ import annotations

from dataclasses import dataclass

from .biquandle import Biquandle
from .mgd import Crossing, MarkedGraphDiagram, MarkedVertex, _UnionFind


@dataclass(frozen=True)
class CrossingRelation:
    sign: int
    under_in: int
    over_in: int
    under_out: int
    over_out: int


@dataclass(frozen=True)
class SaddleRelation:
    legs: tuple[int, int, int, int]


def relations(d: MarkedGraphDiagram):
    """One relation per node, referencing semiarc labels."""
    rels = []
    for node in d.nodes:
        if isinstance(node, Crossing):
            rels.append(
                CrossingRelation(
                    node.sign, node.under_in, node.over_in, node.under_out, node.over_out
                )
            )
        else:
            rels.append(SaddleRelation(node.he))
    return rels


def semiarc_classes(d: MarkedGraphDiagram) -> dict[int, int]:
    """Map semiarc label -> representative after merging at saddles."""
    uf = _UnionFind()
    for lbl in d.endpoints:
        uf.find(lbl)
    for lbl in d.free_loops:
        uf.find(lbl)
    for node in d.nodes:
        if isinstance(node, MarkedVertex):
            a, b, c, dd = node.he
            uf.union(a, b)
            uf.union(b, c)
            uf.union(c, dd)
    return {lbl: uf.find(lbl) for lbl in list(uf.parent)}


def _crossing_checks(d: MarkedGraphDiagram, X: Biquandle, cls: dict[int, int]):
    """Compile per-crossing constraints over class representatives."""
    checks = []
    for node in d.nodes:
        if not isinstance(node, Crossing):
            continue
        a, b, c, dd = (cls[v] for v in node.he)
        if node.sign > 0:
            # f(c) = f(a) under f(d); f(b) = f(d) over f(a)
            checks.append((frozenset((a, c, dd)), lambda f, a=a, c=c, dd=dd: f[c] == X.under_op(f[a], f[dd])))
            checks.append((frozenset((a, b, dd)), lambda f, a=a, b=b, dd=dd: f[b] == X.over_op(f[dd], f[a])))
        else:
            # f(a) = f(c) under f(d); f(b) = f(d) over f(c)
            checks.append((frozenset((a, c, dd)), lambda f, a=a, c=c, dd=dd: f[a] == X.under_op(f[c], f[dd])))
            checks.append((frozenset((b, c, dd)), lambda f, b=b, c=c, dd=dd: f[b] == X.over_op(f[dd], f[c])))
    return checks


def _search_order(reps, checks):
    """Node-driven variable order: prefer variables that complete constraints."""
    remaining = [(set(vars_), fn) for vars_, fn in checks]
    unseen = set(reps)
    order = []
    while unseen:
        best = None
        for rep in sorted(unseen):
            open_now = sum(1 for vars_, _fn in remaining if rep in vars_ and len(vars_ & unseen) == 1)
            if best is None or open_now > best[1]:
                best = (rep, open_now)
        rep = best[0]
        order.append(rep)
        unseen.discard(rep)
    return order


def enumerate_colorings(d: MarkedGraphDiagram, X: Biquandle) -> list[dict[int, int]]:
    """All X-colorings, listed lexicographically in the sorted class reps."""
    cls = semiarc_classes(d)
    reps = sorted(set(cls.values()))
    checks = _crossing_checks(d, X, cls)
    order = _search_order(reps, checks)
    pos = {rep: i for i, rep in enumerate(order)}
    by_last = {rep: [] for rep in reps}
    for vars_, fn in checks:
        last = max(vars_, key=lambda v: pos[v])
        by_last[last].append(fn)

    found: list[dict[int, int]] = []
    assign: dict[int, int] = {}

    def backtrack(i: int):
        if i == len(order):
            found.append({lbl: assign[rep] for lbl, rep in cls.items()})
            return
        rep = order[i]
        for val in X.elements:
            assign[rep] = val
            if all(fn(assign) for fn in by_last[rep]):
                backtrack(i + 1)
        del assign[rep]

    backtrack(0)
    found.sort(key=lambda f: tuple(f[rep] for rep in reps))
    return found


def counting_invariant(d: MarkedGraphDiagram, X: Biquandle) -> int:
    """Number of X-colorings of the diagram."""
    return len(enumerate_colorings(d, X))
