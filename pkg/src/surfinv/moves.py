"""Rewriting marked graph diagrams by the Yoshikawa move set.

Moves are local rewrites on the rotation-system representation.  Each
move has a forward and a backward direction; sites are concrete matches
found deterministically, and applying a move always returns a fresh,
fully validated diagram.  Pattern faces are genuine faces of the
rotation system, so matches are sound local isotopies.

    g1 / g1p   kink twist with a positive / negative crossing
    g2         poke: push one strand across another (two crossings)
    g3         slide a strand across a coherent triangle of crossings
    g4 / g4p   slide a strand under / over a marked vertex
    g5         slide a marked vertex through a crossing along a bigon
    g6 / g6p   cancel or create a kinked marked vertex (two bar types)
    g7         exchange the attachments of two adjacent marked vertices
    g8         flip both bars in the standard two-vertex four-crossing
               configuration (an involution)
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .mgd import (
    Crossing,
    MarkedGraphDiagram,
    MarkedVertex,
    ValidationError,
    _UnionFind,
    faces,
)

MOVES = ("g1", "g1p", "g2", "g3", "g4", "g4p", "g5", "g6", "g6p", "g7", "g8")
FORWARD, BACKWARD = "forward", "backward"


class InvalidSite(ValueError):
    pass


@dataclass(frozen=True)
class MoveSite:
    move: str
    direction: str
    data: tuple


def _fresh_labels(d: MarkedGraphDiagram, k: int) -> list[int]:
    used = set(d.endpoints) | set(d.free_loops)
    out = []
    lbl = 1
    while len(out) < k:
        if lbl not in used:
            out.append(lbl)
        lbl += 1
    return out


def _splice(raw_nodes, free_loops, joins, drop_labels=()):
    """Assemble a diagram from raw nodes, splicing joined label pairs.

    joins: pairs of labels that become one strand (smallest survives).
    Chains that close up with no remaining node become free loops, except
    labels listed in drop_labels, which simply vanish.
    """
    uf = _UnionFind()
    for node in raw_nodes:
        for lbl in node.he:
            uf.find(lbl)
    for a, b in joins:
        uf.find(a)
        uf.find(b)
        uf.union(a, b)
    nodes = []
    for node in raw_nodes:
        he = tuple(uf.find(x) for x in node.he)
        if isinstance(node, Crossing):
            nodes.append(Crossing(node.sign, he))
        else:
            nodes.append(MarkedVertex(he))
    attached = {lbl for node in nodes for lbl in node.he}
    loops = [lbl for lbl in free_loops if lbl not in drop_labels]
    for grp in uf.classes().values():
        root = min(grp)
        if root not in attached and not any(g in attached for g in grp):
            if not (grp & set(drop_labels)):
                loops.append(root)
    return MarkedGraphDiagram(tuple(nodes), tuple(sorted(loops)))


def _rebuild(d, keep_idx, new_nodes, joins, drop_labels=()):
    raw = [d.nodes[i] for i in keep_idx] + list(new_nodes)
    return _splice(raw, d.free_loops, joins, drop_labels)


def _other_end(d, lbl, here):
    a, b = d.endpoints[lbl]
    return b if a == here else a


# ---------------------------------------------------------------------------
# g1 / g1p: kinks


def _kink_loops(node):
    """Adjacent slot pairs of a crossing carrying the same label."""
    out = []
    for s in range(4):
        if node.he[s] == node.he[(s + 1) % 4]:
            out.append(s)
    return out


def _find_g1_backward(d, sign):
    sites = []
    for i, node in enumerate(d.nodes):
        if isinstance(node, Crossing) and node.sign == sign:
            for s in _kink_loops(node):
                sites.append(MoveSite("g1" if sign > 0 else "g1p", BACKWARD, (i, s)))
    return sites


def _apply_kink_remove(d, site):
    i, s = site.data
    node = d.nodes[i]
    if not isinstance(node, Crossing) or node.he[s] != node.he[(s + 1) % 4]:
        raise InvalidSite(f"no kink loop at node {i} slot {s}")
    loop_lbl = node.he[s]
    other = [node.he[(s + 2) % 4], node.he[(s + 3) % 4]]
    keep = [j for j in range(len(d.nodes)) if j != i]
    if other[0] == other[1]:
        # closed kinked unknot: becomes a free loop
        base = _rebuild(d, keep, [], [], drop_labels=(loop_lbl,))
        lbl = other[0]
        return MarkedGraphDiagram(base.nodes, tuple(sorted(base.free_loops + (lbl,))))
    return _rebuild(d, keep, [], [tuple(other)], drop_labels=(loop_lbl,))


def _find_g1_forward(d, sign):
    move = "g1" if sign > 0 else "g1p"
    sites = []
    for lbl in d.semiarcs:
        for variant in ("uf", "of"):
            sites.append(MoveSite(move, FORWARD, (lbl, variant)))
    return sites


def _apply_kink_insert(d, site, sign):
    lbl, variant = site.data
    if lbl not in d.endpoints and lbl not in d.free_loops:
        raise InvalidSite(f"no semiarc {lbl}")
    loop_lbl, out_lbl = _fresh_labels(d, 2)
    if sign > 0:
        node = (
            Crossing(1, (lbl, loop_lbl, loop_lbl, out_lbl))
            if variant == "uf"
            else Crossing(1, (loop_lbl, lbl, out_lbl, loop_lbl))
        )
    else:
        node = (
            Crossing(-1, (lbl, out_lbl, loop_lbl, loop_lbl))
            if variant == "uf"
            else Crossing(-1, (loop_lbl, loop_lbl, out_lbl, lbl))
        )
    if lbl in d.free_loops:
        # the kinked circle: in-label and out-label coincide
        he = tuple(lbl if x == out_lbl else x for x in node.he)
        node = Crossing(node.sign, he)
        loops = tuple(x for x in d.free_loops if x != lbl)
        return MarkedGraphDiagram(d.nodes + (node,), loops)
    # split lbl: the target-node end is rewired to out_lbl
    (n1, s1), (n2, s2) = d.endpoints[lbl]
    tgt = (n1, s1) if d.slot_role(n1, s1) == "in" else (n2, s2)
    nodes = list(d.nodes)
    h = list(nodes[tgt[0]].he)
    h[tgt[1]] = out_lbl
    old = nodes[tgt[0]]
    nodes[tgt[0]] = Crossing(old.sign, tuple(h)) if isinstance(old, Crossing) else MarkedVertex(tuple(h))
    return MarkedGraphDiagram(tuple(nodes) + (node,), d.free_loops)


# ---------------------------------------------------------------------------
# g6 / g6p: kinked marked vertices


def _find_g6_backward(d, variant):
    move = "g6" if variant == "in" else "g6p"
    sites = []
    for i, node in enumerate(d.nodes):
        if not isinstance(node, MarkedVertex):
            continue
        for s in _kink_loops(node):
            in_bar = s in (0, 2)  # loop occupies one bar group {0,1} or {2,3}
            if (variant == "in") == in_bar:
                sites.append(MoveSite(move, BACKWARD, (i, s)))
    return sites


def _apply_g6_remove(d, site):
    i, s = site.data
    node = d.nodes[i]
    if not isinstance(node, MarkedVertex) or node.he[s] != node.he[(s + 1) % 4]:
        raise InvalidSite(f"no vertex loop at node {i} slot {s}")
    loop_lbl = node.he[s]
    other = [node.he[(s + 2) % 4], node.he[(s + 3) % 4]]
    keep = [j for j in range(len(d.nodes)) if j != i]
    if other[0] == other[1]:
        base = _rebuild(d, keep, [], [], drop_labels=(loop_lbl,))
        return MarkedGraphDiagram(base.nodes, tuple(sorted(base.free_loops + (other[0],))))
    return _rebuild(d, keep, [], [tuple(other)], drop_labels=(loop_lbl,))


def _find_g6_forward(d, variant):
    move = "g6" if variant == "in" else "g6p"
    return [MoveSite(move, FORWARD, (lbl,)) for lbl in d.semiarcs]


def _apply_g6_insert(d, site, variant):
    (lbl,) = site.data
    if lbl not in d.endpoints and lbl not in d.free_loops:
        raise InvalidSite(f"no semiarc {lbl}")
    loop_lbl, out_lbl = _fresh_labels(d, 2)
    if variant == "in":
        # bar separates the through strand from the loop
        node = MarkedVertex((lbl, out_lbl, loop_lbl, loop_lbl))
    else:
        # bar crosses the loop
        node = MarkedVertex((out_lbl, loop_lbl, loop_lbl, lbl))
    if lbl in d.free_loops:
        he = tuple(lbl if x == out_lbl else x for x in node.he)
        node = MarkedVertex(he)
        loops = tuple(x for x in d.free_loops if x != lbl)
        return MarkedGraphDiagram(d.nodes + (node,), loops)
    (n1, s1), (n2, s2) = d.endpoints[lbl]
    tgt = (n1, s1) if d.slot_role(n1, s1) == "in" else (n2, s2)
    nodes = list(d.nodes)
    h = list(nodes[tgt[0]].he)
    h[tgt[1]] = out_lbl
    old = nodes[tgt[0]]
    nodes[tgt[0]] = Crossing(old.sign, tuple(h)) if isinstance(old, Crossing) else MarkedVertex(tuple(h))
    return MarkedGraphDiagram(tuple(nodes) + (node,), d.free_loops)


# ---------------------------------------------------------------------------
# g2: pokes

_UNDER_SLOTS = (0, 2)


def _strand_kind(slot):
    return "under" if slot in _UNDER_SLOTS else "over"


def _find_g2_backward(d):
    sites = []
    for face in faces(d):
        if len(face) != 2:
            continue
        (n1, s1), (n2, s2) = face
        if n1 == n2:
            continue
        a, b = d.nodes[n1], d.nodes[n2]
        if not (isinstance(a, Crossing) and isinstance(b, Crossing)):
            continue
        e1 = a.he[s1]
        e2 = b.he[s2]
        if e1 == e2:
            continue
        # both bigon edges must join n1 and n2
        if {p for p, _ in d.endpoints[e1]} != {n1, n2}:
            continue
        if {p for p, _ in d.endpoints[e2]} != {n1, n2}:
            continue
        slots_e1 = [s for _nn, s in d.endpoints[e1]]
        slots_e2 = [s for nn, s in d.endpoints[e2]]
        k1 = {_strand_kind(s) for s in slots_e1}
        k2 = {_strand_kind(s) for s in slots_e2}
        if k1 == {"under"} and k2 == {"over"}:
            sites.append(MoveSite("g2", BACKWARD, (min(n1, n2), max(n1, n2), e1, e2)))
        elif k1 == {"over"} and k2 == {"under"}:
            sites.append(MoveSite("g2", BACKWARD, (min(n1, n2), max(n1, n2), e2, e1)))
    out = sorted(set(sites), key=lambda s: s.data)
    return out


def _apply_g2_remove(d, site):
    n1, n2, e_under, e_over = site.data
    for n in (n1, n2):
        if not (0 <= n < len(d.nodes)) or not isinstance(d.nodes[n], Crossing):
            raise InvalidSite("bad poke site")
    ju = []
    jo = []
    for n in (n1, n2):
        node = d.nodes[n]
        u_other = [node.he[s] for s in _UNDER_SLOTS if node.he[s] != e_under]
        o_other = [node.he[s] for s in (1, 3) if node.he[s] != e_over]
        if len(u_other) != 1 or len(o_other) != 1:
            raise InvalidSite("site does not look like a poke bigon")
        ju.append(u_other[0])
        jo.append(o_other[0])
    keep = [j for j in range(len(d.nodes)) if j not in (n1, n2)]
    joins = []
    extra_loops = []
    for pair, mid in ((ju, e_under), (jo, e_over)):
        if pair[0] == pair[1]:
            extra_loops.append(pair[0])
        else:
            joins.append(tuple(pair))
    out = _rebuild(d, keep, [], joins, drop_labels=(e_under, e_over))
    if extra_loops:
        out = MarkedGraphDiagram(out.nodes, tuple(sorted(out.free_loops + tuple(extra_loops))))
    return out


def _find_g2_forward(d):
    sites = []
    for fi, face in enumerate(faces(d)):
        for i, da in enumerate(face):
            for j, db in enumerate(face):
                if i == j:
                    continue
                sites.append(MoveSite("g2", FORWARD, (da, db)))
    return sites


def _apply_g2_insert(d, site):
    (na, sa), (nb, sb) = site.data
    try:
        ea = d.nodes[na].he[sa]
        eb = d.nodes[nb].he[sb]
    except (IndexError, AttributeError):
        raise InvalidSite("bad poke darts") from None
    if ea == eb:
        raise InvalidSite("self-poke not supported")
    labels = _fresh_labels(d, 4)
    a2, b2, t, m = labels
    nodes = list(d.nodes)

    def retarget(lbl, new_lbl):
        (p1, q1), (p2, q2) = d.endpoints[lbl]
        tgt = (p1, q1) if d.slot_role(p1, q1) == "in" else (p2, q2)
        h = list(nodes[tgt[0]].he)
        h[tgt[1]] = new_lbl
        old = nodes[tgt[0]]
        nodes[tgt[0]] = (
            Crossing(old.sign, tuple(h)) if isinstance(old, Crossing) else MarkedVertex(tuple(h))
        )

    retarget(ea, a2)
    retarget(eb, b2)
    # two embeddings are possible depending on the relative boundary
    # directions; build both and keep the first that validates
    variants = [
        [Crossing(1, (ea, m, t, b2)), Crossing(-1, (t, m, a2, eb))],
        [Crossing(-1, (ea, m, t, eb)), Crossing(1, (t, m, a2, b2))],
    ]
    last_err = None
    for pair in variants:
        try:
            return MarkedGraphDiagram(tuple(nodes) + tuple(pair), d.free_loops)
        except ValidationError as exc:
            last_err = exc
    raise InvalidSite(f"poke does not embed: {last_err}")


# ---------------------------------------------------------------------------
# g3: triangle slide


def _find_g3(d):
    sites = []
    for face in faces(d):
        if len(face) != 3:
            continue
        ns = [n for n, _s in face]
        if len(set(ns)) != 3:
            continue
        if not all(isinstance(d.nodes[n], Crossing) for n in ns):
            continue
        # edges of the triangle and their strand kinds at both ends
        edges = []
        ok = True
        for n, s in face:
            lbl = d.nodes[n].he[s]
            ends = d.endpoints[lbl]
            if {p for p, _ in ends} - set(ns):
                ok = False
                break
            kinds = {_strand_kind(q) for _p, q in ends}
            edges.append((lbl, kinds))
        if not ok:
            continue
        kindsets = [k for _lbl, k in edges]
        if {"under"} in kindsets and {"over"} in kindsets:
            sites.append(MoveSite("g3", FORWARD, tuple(sorted(ns))))
    return sorted(set(sites), key=lambda s: s.data)


def _apply_g3(d, site):
    ns = site.data
    if len(ns) != 3 or not all(isinstance(d.nodes[n], Crossing) for n in ns):
        raise InvalidSite("bad triangle")
    nodes = list(d.nodes)
    fresh = _fresh_labels(d, 3)
    # strands: pairs of crossings sharing a strand; on each strand swap
    # the order of its two crossings by exchanging attachments
    tri = set(ns)
    # find internal edges between each pair
    internal = {}
    for lbl, ends in d.endpoints.items():
        ps = {p for p, _s in ends}
        if ps <= tri and len(ps) == 2:
            key = tuple(sorted(ps))
            internal.setdefault(key, []).append(lbl)
    if sorted(len(v) for v in internal.values()) != [1, 1, 1]:
        raise InvalidSite("triangle is not simple")

    def node_set(i, slot, val):
        h = list(nodes[i].he)
        h[slot] = val
        nodes[i] = Crossing(nodes[i].sign, tuple(h))

    # per strand (= internal edge): endpoints (na, sa), (nb, sb); the
    # strand enters the triangle at one crossing and leaves at the other.
    for newlbl, (key, (lbl,)) in zip(fresh, sorted(internal.items())):
        (na, sa), (nb, sb) = d.endpoints[lbl]
        # external attachments of this strand at na and nb: the partner
        # slots on the same strand (under: 0<->2, over: 1<->3)
        pa = (sa + 2) % 4
        pb = (sb + 2) % 4
        ea = nodes[na].he[pa]
        eb = nodes[nb].he[pb]
        # swap: external ea moves to nb's inner slot, eb to na's inner slot
        node_set(na, sa, eb if eb != lbl else newlbl)
        node_set(nb, sb, ea if ea != lbl else newlbl)
        node_set(na, pa, newlbl)
        node_set(nb, pb, newlbl)
    return MarkedGraphDiagram(tuple(nodes), d.free_loops)


# ---------------------------------------------------------------------------
# g4 / g4p: strand past a marked vertex


def _find_g4(d, over):
    move = "g4p" if over else "g4"
    want = {"over"} if over else {"under"}
    sites = []
    for face in faces(d):
        if len(face) != 3:
            continue
        vs = [(n, s) for n, s in face if isinstance(d.nodes[n], MarkedVertex)]
        xs = [(n, s) for n, s in face if isinstance(d.nodes[n], Crossing)]
        if len(vs) != 1 or len(xs) != 2:
            continue
        (v, _sv) = vs[0]
        (x1, _s1), (x2, _s2) = xs
        if x1 == x2:
            continue
        # the sliding strand S crosses two adjacent legs of v
        legs = []
        ok = True
        for x in (x1, x2):
            found = [
                (s, d.nodes[x].he[s])
                for s in range(4)
                if {p for p, _q in d.endpoints[d.nodes[x].he[s]]} == {v, x}
            ]
            if len(found) != 1:
                ok = False
                break
            legs.append(found[0])
        if not ok:
            continue
        # S's segment between the crossings
        mids = [
            lbl
            for lbl, ends in d.endpoints.items()
            if {p for p, _q in ends} == {x1, x2}
        ]
        if len(mids) != 1:
            continue
        mid = mids[0]
        kinds = {_strand_kind(q) for _p, q in d.endpoints[mid]}
        if kinds != want:
            continue
        # legs must sit at adjacent slots of v
        slot_v = {}
        for x, (sx, lbl) in zip((x1, x2), legs):
            sv = [q for p, q in d.endpoints[lbl] if p == v]
            if not sv:
                ok = False
                break
            slot_v[x] = sv[0]
        if not ok:
            continue
        diff = (slot_v[x1] - slot_v[x2]) % 4
        if diff not in (1, 3):
            continue
        first = x1 if diff == 3 else x2  # leg of `first` sits just before the other, CCW
        second = x2 if first == x1 else x1
        sites.append(MoveSite(move, FORWARD, (v, first, second)))
    return sorted(set(sites), key=lambda s: s.data)


def _smoothing_signature(d):
    from .mgd import AGAINST_BARS, ALONG_BARS, smoothed_circles

    return (
        len(smoothed_circles(d, ALONG_BARS)),
        len(smoothed_circles(d, AGAINST_BARS)),
    )


def _apply_g4(d, site, over):
    """Slide strand S from one pair of adjacent vertex legs to the other."""
    v, x1, x2 = site.data
    node_v = d.nodes[v]
    if not isinstance(node_v, MarkedVertex):
        raise InvalidSite("not a vertex")
    leg = {}
    for x in (x1, x2):
        cands = [
            (sv, node_v.he[sv])
            for sv in range(4)
            if {p for p, _q in d.endpoints[node_v.he[sv]]} == {v, x}
        ]
        if len(cands) != 1:
            raise InvalidSite("legs not found")
        leg[x] = cands[0]
    s1, l1 = leg[x1]
    s2, l2 = leg[x2]
    if (s2 - s1) % 4 != 1:
        raise InvalidSite("legs not adjacent CCW")
    t1, t2 = (s1 + 2) % 4, (s2 + 2) % 4
    m1, m2 = node_v.he[t1], node_v.he[t2]
    if m1 == m2 or {m1, m2} & {l1, l2}:
        raise InvalidSite("degenerate opposite legs")
    for m in (m1, m2):
        if all(p == v for p, _q in d.endpoints[m]):
            raise InvalidSite("opposite leg loops at the vertex")

    s_slots = _UNDER_SLOTS if not over else (1, 3)
    leg_slots = (1, 3) if not over else _UNDER_SLOTS

    # S's external ends and direction data at x1, x2
    def strand_info(x, leg_lbl):
        node = d.nodes[x]
        s_in, s_out = (node.he[s_slots[0]], node.he[s_slots[1]])
        lg = [s for s in leg_slots if node.he[s] == leg_lbl]
        if len(lg) != 1:
            raise InvalidSite("leg is not on the crossed strand pair")
        far = node.he[(lg[0] + 2) % 4]
        return s_in, s_out, far

    sin1, sout1, f1 = strand_info(x1, l1)
    sin2, sout2, f2 = strand_info(x2, l2)
    mids = {sout1, sin1} & {sout2, sin2}
    if len(mids) != 1:
        raise InvalidSite("strand segment between crossings not unique")
    mid = mids.pop()
    # external S ends
    sA = sin1 if sin1 != mid else sout1
    sB = sin2 if sin2 != mid else sout2
    if sA == mid or sB == mid:
        raise InvalidSite("strand too short")

    keep = [j for j in range(len(d.nodes)) if j not in (x1, x2)]
    fresh = _fresh_labels(d, 3)
    w1, w2, nm = fresh

    nodes = [d.nodes[j] for j in keep]

    # cut m1, m2: far pieces get labels w1, w2
    idx_of = {j: i for i, j in enumerate(keep)}
    for mlbl, wlbl in ((m1, w1), (m2, w2)):
        ends = [(p, q) for p, q in d.endpoints[mlbl] if p != v or q in (t1, t2)]
        fars = [(p, q) for p, q in d.endpoints[mlbl] if not (p == v and q in (t1, t2))]
        if len(fars) != 1:
            raise InvalidSite("opposite leg endpoints unclear")
        fp, fq = fars[0]
        i = idx_of[fp]
        h = list(nodes[i].he)
        h[fq] = wlbl
        nodes[i] = (
            Crossing(nodes[i].sign, tuple(h))
            if isinstance(nodes[i], Crossing)
            else MarkedVertex(tuple(h))
        )

    # new crossings: S crosses m2's strand then m1's (other side of v), in
    # the order matching its old direction; chirality resolved empirically.
    def build_cross(s_in_lbl, s_out_lbl, c_in_lbl, c_out_lbl):
        # variants: S under (g4) or over (g4p), both record types
        if not over:
            return [
                Crossing(1, (s_in_lbl, c_in_lbl, s_out_lbl, c_out_lbl)),
                Crossing(-1, (s_in_lbl, c_out_lbl, s_out_lbl, c_in_lbl)),
            ]
        return [
            Crossing(1, (c_in_lbl, s_in_lbl, c_out_lbl, s_out_lbl)),
            Crossing(-1, (c_in_lbl, s_out_lbl, c_out_lbl, s_in_lbl)),
        ]

    # m-strand directions: role of v-slot tells whether m flows into v
    role_t1 = d.slot_role(v, t1)
    role_t2 = d.slot_role(v, t2)
    # after the cut: v-side keeps label m; far side w.  If m flows into v
    # (role IN) the strand runs w -> crossing -> m; else m -> crossing -> w.
    def m_dirs(mlbl, wlbl, role):
        return (wlbl, mlbl) if role == "in" else (mlbl, wlbl)

    c1_in, c1_out = m_dirs(m2, w2, role_t2)
    c2_in, c2_out = m_dirs(m1, w1, role_t1)

    sig = _smoothing_signature(d)
    joins = []
    if l1 != f1:
        joins.append((l1, f1))
    if l2 != f2:
        joins.append((l2, f2))
    last = None
    variants = []
    for sx, sy in ((sA, sB), (sB, sA)):
        for first, second in (((c1_in, c1_out), (c2_in, c2_out)), ((c2_in, c2_out), (c1_in, c1_out))):
            variants.append([(sx, nm) + first, (nm, sy) + second])
    for pairs in variants:
        for ca in build_cross(*pairs[0]):
            for cb in build_cross(*pairs[1]):
                try:
                    cand = _splice(nodes + [ca, cb], d.free_loops, joins)
                    if _smoothing_signature(cand) == sig:
                        return cand
                    last = InvalidSite("smoothing changed")
                except (ValidationError, KeyError) as exc:
                    last = exc
    raise InvalidSite(f"slide does not embed: {last}")


# ---------------------------------------------------------------------------
# g5: marked vertex through a crossing


def _find_g5(d):
    sites = []
    for face in faces(d):
        if len(face) != 2:
            continue
        (n1, s1), (n2, s2) = face
        if n1 == n2:
            continue
        kinds = {n1: d.nodes[n1], n2: d.nodes[n2]}
        xs = [n for n in (n1, n2) if isinstance(kinds[n], Crossing)]
        vs = [n for n in (n1, n2) if isinstance(kinds[n], MarkedVertex)]
        if len(xs) != 1 or len(vs) != 1:
            continue
        x, v = xs[0], vs[0]
        e1, e2 = kinds[n1].he[s1], kinds[n2].he[s2]
        if e1 == e2:
            continue
        if {p for p, _q in d.endpoints[e1]} != {x, v}:
            continue
        if {p for p, _q in d.endpoints[e2]} != {x, v}:
            continue
        # bar along the bigon: the two bigon edges share a bar group at v
        sv = sorted(q for p, q in list(d.endpoints[e1]) + list(d.endpoints[e2]) if p == v)
        if sv not in ([0, 1], [2, 3]):
            continue
        sites.append(MoveSite("g5", FORWARD, (v, x, min(e1, e2), max(e1, e2))))
    return sorted(set(sites), key=lambda s: s.data)


def _apply_g5(d, site):
    v, x, e1, e2 = site.data
    node_v, node_x = d.nodes[v], d.nodes[x]
    if not isinstance(node_v, MarkedVertex) or not isinstance(node_x, Crossing):
        raise InvalidSite("bad g5 site")
    sv = {lbl: q for lbl, ends in ((e1, d.endpoints[e1]), (e2, d.endpoints[e2])) for p, q in ends if p == v}
    sx = {lbl: q for lbl, ends in ((e1, d.endpoints[e1]), (e2, d.endpoints[e2])) for p, q in ends if p == x}
    if set(sv) != {e1, e2} or set(sx) != {e1, e2}:
        raise InvalidSite("bigon edges not found")
    # far legs of v (the pair opposite the bigon) and of x
    fv = {q: node_v.he[q] for q in range(4) if q not in sv.values()}
    fx = {q: node_x.he[q] for q in range(4) if q not in sx.values()}
    if len(fv) != 2 or len(fx) != 2:
        raise InvalidSite("degenerate g5 site")
    # strand pairing at x: slot partners (0,2) and (1,3)
    partner_x = {lbl: node_x.he[(sx[lbl] + 2) % 4] for lbl in (e1, e2)}
    # position pairing at v: opposite slots continue the planar line
    partner_v = {lbl: node_v.he[(sv[lbl] + 2) % 4] for lbl in (e1, e2)}
    w1, w2 = partner_x[e1], partner_x[e2]
    fl1, fl2 = partner_v[e1], partner_v[e2]
    if len({w1, w2, fl1, fl2}) != 4:
        raise InvalidSite("g5 site touches itself")

    fresh = _fresh_labels(d, 2)
    n1, n2 = fresh
    keep = [j for j in range(len(d.nodes)) if j not in (v, x)]
    nodes = [d.nodes[j] for j in keep]

    sig = _smoothing_signature(d)
    # rebuild: v' sits on the w-side, x' on the f-side; the strand that was
    # under at x stays under. e1's strand: w1 -> v' -> n1 -> x' -> fl1.
    e1_under = sx[e1] in _UNDER_SLOTS
    # roles: do the strands flow toward x or toward v?  e1's flow:
    e1_into_x = d.slot_role(x, sx[e1]) == "in"
    e2_into_x = d.slot_role(x, sx[e2]) == "in"
    sign = node_x.sign
    last = None
    for vert_variant in range(2):
        for cross_variant in range(2):
            # vertex rotation: (w1, w2, n2, n1) or (w1, w2, n1, n2); bar
            # along the new bigon pair in both
            if vert_variant == 0:
                vnew = MarkedVertex((w1, w2, n2, n1))
            else:
                vnew = MarkedVertex((w2, w1, n1, n2))
            # crossing: under pair carries e1's strand iff e1_under
            if e1_under:
                upair = (n1, fl1) if e1_into_x else (fl1, n1)
                opair = (n2, fl2) if e2_into_x else (fl2, n2)
            else:
                upair = (n2, fl2) if e2_into_x else (fl2, n2)
                opair = (n1, fl1) if e1_into_x else (fl1, n1)
            if cross_variant == 0:
                xnew = Crossing(1, (upair[0], opair[0], upair[1], opair[1]))
            else:
                xnew = Crossing(-1, (upair[0], opair[1], upair[1], opair[0]))
            try:
                cand = MarkedGraphDiagram(tuple(nodes) + (vnew, xnew), d.free_loops)
                if _smoothing_signature(cand) == sig:
                    return cand
                last = InvalidSite("smoothing changed")
            except (ValidationError, KeyError) as exc:
                last = exc
    raise InvalidSite(f"g5 does not embed: {last}")


# ---------------------------------------------------------------------------
# g7: two adjacent marked vertices


def _norm_vertex(he, lbl, want_slot):
    """Rotations (by 0 or 2) putting lbl at want_slot, preserving bars."""
    out = []
    for r in (0, 2):
        rot = he[r:] + he[:r]
        if rot[want_slot] == lbl:
            out.append(rot)
    return out


def _find_g7(d, direction):
    sites = []
    for va, na in enumerate(d.nodes):
        if not isinstance(na, MarkedVertex):
            continue
        for vb, nb in enumerate(d.nodes):
            if vb == va or not isinstance(d.nodes[vb], MarkedVertex):
                continue
            shared = set(na.he) & set(d.nodes[vb].he)
            for e in sorted(shared):
                if len([1 for x in na.he if x == e]) != 1:
                    continue
                if len([1 for x in d.nodes[vb].he if x == e]) != 1:
                    continue
                slot_a = na.he.index(e)
                slot_b = d.nodes[vb].he.index(e)
                if direction == FORWARD:
                    # e at an odd slot of both; in at va, out at vb
                    if slot_a % 2 == 1 and slot_b % 2 == 1:
                        if d.slot_role(va, slot_a) == "in" and d.slot_role(vb, slot_b) == "out":
                            sites.append(MoveSite("g7", FORWARD, (va, vb, e)))
                else:
                    # e at an even slot of both; out at va, in at vb
                    if slot_a % 2 == 0 and slot_b % 2 == 0:
                        if d.slot_role(va, slot_a) == "out" and d.slot_role(vb, slot_b) == "in":
                            sites.append(MoveSite("g7", BACKWARD, (va, vb, e)))
    return sorted(set(sites), key=lambda s: s.data)


def _apply_g7(d, site):
    va, vb, e = site.data
    na, nb = d.nodes[va], d.nodes[vb]
    if not (isinstance(na, MarkedVertex) and isinstance(nb, MarkedVertex)):
        raise InvalidSite("bad g7 site")
    nodes = list(d.nodes)
    sig = _smoothing_signature(d)
    if site.direction == FORWARD:
        forms_a = _norm_vertex(na.he, e, 1)
        forms_b = _norm_vertex(nb.he, e, 1)
        last = None
        for fa in forms_a:
            x3, _e, x1, x2 = fa
            for fb in forms_b:
                x6, _e2, x5, x4 = fb
                nodes[va] = MarkedVertex((e, x5, x1, x2))
                nodes[vb] = MarkedVertex((e, x4, x6, x3))
                try:
                    cand = MarkedGraphDiagram(tuple(nodes), d.free_loops)
                    if _smoothing_signature(cand) == sig:
                        return cand
                    last = InvalidSite("smoothing changed")
                except (ValidationError, KeyError) as exc:
                    last = exc
        raise InvalidSite(f"g7 does not embed: {last}")
    forms_a = _norm_vertex(na.he, e, 0)
    forms_b = _norm_vertex(nb.he, e, 0)
    last = None
    for fa in forms_a:
        _e, x5, x1, x2 = fa
        for fb in forms_b:
            _e2, x4, x6, x3 = fb
            nodes[va] = MarkedVertex((x3, e, x1, x2))
            nodes[vb] = MarkedVertex((x6, e, x5, x4))
            try:
                cand = MarkedGraphDiagram(tuple(nodes), d.free_loops)
                if _smoothing_signature(cand) == sig:
                    return cand
                last = InvalidSite("smoothing changed")
            except (ValidationError, KeyError) as exc:
                last = exc
    raise InvalidSite(f"g7 does not embed: {last}")


# ---------------------------------------------------------------------------
# g8: bar flip in the two-vertex four-crossing configuration


def _find_g8(d):
    sites = []
    ep = d.endpoints

    def other_node(lbl, here):
        ends = [p for p, _q in ep[lbl]]
        if ends[0] == here and ends[1] == here:
            return here
        return ends[1] if ends[0] == here else ends[0]

    for c1i, c1 in enumerate(d.nodes):
        if not isinstance(c1, Crossing) or c1.sign != 1:
            continue
        a, b, c, dd = c1.he
        v1 = other_node(a, c1i)
        v2 = other_node(dd, c1i)
        c2i = other_node(b, c1i)
        c3i = other_node(c, c1i)
        if len({v1, v2, c1i, c2i, c3i}) != 5:
            continue
        if not (
            isinstance(d.nodes[v1], MarkedVertex)
            and isinstance(d.nodes[v2], MarkedVertex)
            and isinstance(d.nodes[c2i], Crossing)
            and isinstance(d.nodes[c3i], Crossing)
        ):
            continue
        c2, c3 = d.nodes[c2i], d.nodes[c3i]
        if c2.sign != -1 or c3.sign != -1:
            continue
        # c2: X- (s2: c4->c2, S: c2->c1, s2: c2->V1, S: port->c2)
        if c2.he[1] != b:
            continue
        if other_node(c2.he[2], c2i) != v1:
            continue
        c4i = other_node(c2.he[0], c2i)
        # c3: X- (s1: c1->c3, T: c3->c4, s1: c3->port, T: V2->c3)
        if c3.he[0] != c:
            continue
        if other_node(c3.he[3], c3i) != v2:
            continue
        if other_node(c3.he[1], c3i) != c4i:
            continue
        if c4i in (v1, v2, c1i, c2i, c3i) or not isinstance(d.nodes[c4i], Crossing):
            continue
        c4 = d.nodes[c4i]
        if c4.sign != 1:
            continue
        # c4: X+ (s2: port->c4, T: c3->c4, s2: c4->c2, T: c4->port)
        if c4.he[1] != c3.he[1] or c4.he[2] != c2.he[0]:
            continue
        # vertex slot arrangements: legs adjacent as in the template
        na, nb = d.nodes[v1], d.nodes[v2]
        ok_v1 = any(
            rot[2] == c2.he[2] and rot[3] == a
            for r in range(4)
            for rot in (na.he[r:] + na.he[:r],)
        )
        ok_v2 = any(
            rot[2] == dd and rot[3] == c3.he[3]
            for r in range(4)
            for rot in (nb.he[r:] + nb.he[:r],)
        )
        if ok_v1 and ok_v2:
            sites.append(MoveSite("g8", FORWARD, (v1, v2, c1i, c2i, c3i, c4i)))
    return sorted(set(sites), key=lambda s: s.data)


def _apply_g8(d, site):
    v1, v2 = site.data[0], site.data[1]
    na, nb = d.nodes[v1], d.nodes[v2]
    if not (isinstance(na, MarkedVertex) and isinstance(nb, MarkedVertex)):
        raise InvalidSite("bad g8 site")
    nodes = list(d.nodes)
    nodes[v1] = MarkedVertex(na.he[1:] + na.he[:1])
    nodes[v2] = MarkedVertex(nb.he[1:] + nb.he[:1])
    sig = _smoothing_signature(d)
    cand = MarkedGraphDiagram(tuple(nodes), d.free_loops)
    # bar flips here preserve the represented surface only in this pattern;
    # smoothing circle counts are still a cheap sanity guard
    if _smoothing_signature(cand) != sig:
        raise InvalidSite("smoothing changed under g8")
    return cand


# ---------------------------------------------------------------------------
# random walk and classical reduction


def find_sites(d: MarkedGraphDiagram, move: str, direction: str) -> list[MoveSite]:
    """All matches of the move pattern, deterministically ordered."""
    if move == "g1":
        return _find_g1_forward(d, 1) if direction == FORWARD else _find_g1_backward(d, 1)
    if move == "g1p":
        return _find_g1_forward(d, -1) if direction == FORWARD else _find_g1_backward(d, -1)
    if move == "g2":
        return _find_g2_forward(d) if direction == FORWARD else _find_g2_backward(d)
    if move == "g3":
        return _find_g3(d)
    if move == "g4":
        return _find_g4(d, over=False)
    if move == "g4p":
        return _find_g4(d, over=True)
    if move == "g5":
        return _find_g5(d)
    if move == "g6":
        return _find_g6_forward(d, "in") if direction == FORWARD else _find_g6_backward(d, "in")
    if move == "g6p":
        return _find_g6_forward(d, "out") if direction == FORWARD else _find_g6_backward(d, "out")
    if move == "g7":
        return _find_g7(d, direction)
    if move == "g8":
        return _find_g8(d)
    raise ValueError(f"unknown move {move!r}")


def apply_move(d: MarkedGraphDiagram, site: MoveSite) -> MarkedGraphDiagram:
    """Rewrite at the site; result is validated before being returned."""
    mv, direction = site.move, site.direction
    if mv == "g1":
        return _apply_kink_insert(d, site, 1) if direction == FORWARD else _apply_kink_remove(d, site)
    if mv == "g1p":
        return _apply_kink_insert(d, site, -1) if direction == FORWARD else _apply_kink_remove(d, site)
    if mv == "g2":
        return _apply_g2_insert(d, site) if direction == FORWARD else _apply_g2_remove(d, site)
    if mv == "g3":
        return _apply_g3(d, site)
    if mv == "g4":
        return _apply_g4(d, site, over=False)
    if mv == "g4p":
        return _apply_g4(d, site, over=True)
    if mv == "g5":
        return _apply_g5(d, site)
    if mv == "g6":
        return _apply_g6_insert(d, site, "in") if direction == FORWARD else _apply_g6_remove(d, site)
    if mv == "g6p":
        return _apply_g6_insert(d, site, "out") if direction == FORWARD else _apply_g6_remove(d, site)
    if mv == "g7":
        return _apply_g7(d, site)
    if mv == "g8":
        return _apply_g8(d, site)
    raise ValueError(f"unknown move {mv!r}")


def all_sites(d: MarkedGraphDiagram, moves=MOVES) -> list[MoveSite]:
    out = []
    for mv in moves:
        for direction in (FORWARD, BACKWARD):
            if mv in ("g3", "g4", "g4p", "g5", "g8") and direction == BACKWARD:
                continue  # symmetric rewrites expose one direction
            out.extend(find_sites(d, mv, direction))
    return out


def random_walk(d: MarkedGraphDiagram, steps: int, seed: int, moves=MOVES) -> MarkedGraphDiagram:
    """Apply `steps` seeded uniform choices of applicable (move, site)."""
    rng = random.Random(seed)
    cur = d
    for _ in range(steps):
        sites = all_sites(cur, moves)
        rng.shuffle(sites)
        applied = False
        for site in sites:
            try:
                cur = apply_move(cur, site)
                applied = True
                break
            except (InvalidSite, ValidationError):
                continue
        if not applied:
            break
    return cur


def reduce_classical(d: MarkedGraphDiagram, budget: int | None = None) -> MarkedGraphDiagram:
    """Greedy Reidemeister simplification of a crossings-only diagram.

    Applies crossing-removing moves first and explores triangle slides
    under a bounded budget to unlock further reductions.
    """
    from .mgd import render_mgd

    def shrink(cur):
        while True:
            progressed = False
            for mv in ("g1", "g1p", "g2"):
                sites = find_sites(cur, mv, BACKWARD)
                if sites:
                    try:
                        cur = apply_move(cur, sites[0])
                        progressed = True
                        break
                    except (InvalidSite, ValidationError):
                        continue
            if not progressed:
                return cur

    start = shrink(d)
    if not start.crossings:
        return start
    budget = budget if budget is not None else 10 * max(1, len(d.crossings))
    best = start
    seen = {render_mgd(_canonical(start))}
    stack = [start]
    while stack and budget > 0:
        cur = stack.pop()
        for site in _find_g3(cur):
            if budget <= 0:
                break
            budget -= 1
            try:
                nxt = shrink(apply_move(cur, site))
            except (InvalidSite, ValidationError):
                continue
            key = render_mgd(_canonical(nxt))
            if key in seen:
                continue
            seen.add(key)
            if not nxt.crossings:
                return nxt
            if len(nxt.crossings) < len(best.crossings):
                best = nxt
            stack.append(nxt)
    return best


def _canonical(d: MarkedGraphDiagram) -> MarkedGraphDiagram:
    """Relabel by first appearance; vertex records rotation-normalized."""
    nodes = list(d.nodes)
    loops_src = sorted(d.free_loops)
    for _ in range(8):
        mapping = {}
        nxt = 1
        for node in nodes:
            for lbl in node.he:
                if lbl not in mapping:
                    mapping[lbl] = nxt
                    nxt += 1
        loops = []
        for lbl in loops_src:
            mapping[lbl] = nxt
            loops.append(nxt)
            nxt += 1
        relabeled = []
        changed = False
        for node in nodes:
            he = tuple(mapping[x] for x in node.he)
            if isinstance(node, Crossing):
                relabeled.append(Crossing(node.sign, he))
            else:
                rot = he[2:] + he[:2]
                if rot < he:
                    he = rot
                    changed = True
                relabeled.append(MarkedVertex(he))
        nodes = relabeled
        loops_src = loops
        if not changed:
            break
    return MarkedGraphDiagram(tuple(nodes), tuple(loops_src))


def canonical_render(d: MarkedGraphDiagram) -> str:
    from .mgd import render_mgd

    return render_mgd(_canonical(d))
