"""Marked graph diagrams: data model, parsing, validation, smoothing.

A diagram is a 4-regular combinatorial map whose nodes are classical
crossings and marked (saddle) vertices, plus crossingless free loops.
Half-edge slots are listed in counterclockwise order around each node:

* ``X+ a b c d``   a = under-in, b = over-in, c = under-out, d = over-out
* ``X- a b c d``   a = under-in, b = over-out, c = under-out, d = over-in
* ``V a b c d``    the bar separates {a, b} from {c, d}
* ``O k``          free loop with label k

Crossing slots carry fixed in/out roles; at a marked vertex incoming and
outgoing half-edges alternate around the node (source-sink orientation),
and which of the two alternating patterns applies is inferred during
validation.  Every diagram is checked for planarity by tracing faces of
the rotation system, one sphere per connected component.
"""

from __future__ import annotations

from dataclasses import dataclass, field

ALONG_BARS = "along"
AGAINST_BARS = "against"

IN, OUT = "in", "out"


class ParseError(ValueError):
    pass


class ValidationError(ValueError):
    """A structural invariant failed; message names the witness."""


class NotAdmissible(ValueError):
    pass


@dataclass(frozen=True)
class Crossing:
    sign: int
    he: tuple[int, int, int, int]

    @property
    def under_in(self) -> int:
        return self.he[0]

    @property
    def under_out(self) -> int:
        return self.he[2]

    @property
    def over_in(self) -> int:
        return self.he[1] if self.sign > 0 else self.he[3]

    @property
    def over_out(self) -> int:
        return self.he[3] if self.sign > 0 else self.he[1]


@dataclass(frozen=True)
class MarkedVertex:
    he: tuple[int, int, int, int]


Node = Crossing | MarkedVertex

# Fixed slot roles; marked vertices alternate starting in or out.
_CROSSING_ROLES = {1: (IN, IN, OUT, OUT), -1: (IN, OUT, OUT, IN)}


@dataclass(frozen=True)
class MarkedGraphDiagram:
    nodes: tuple[Node, ...]
    free_loops: tuple[int, ...] = ()
    # derived, filled in during validation
    endpoints: dict = field(init=False, repr=False, compare=False, hash=False, default=None)
    vertex_flips: dict = field(init=False, repr=False, compare=False, hash=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "free_loops", tuple(self.free_loops))
        _validate(self)

    @property
    def semiarcs(self) -> tuple[int, ...]:
        return tuple(sorted(self.endpoints)) + tuple(sorted(self.free_loops))

    @property
    def crossings(self):
        return [n for n in self.nodes if isinstance(n, Crossing)]

    @property
    def vertices(self):
        return [n for n in self.nodes if isinstance(n, MarkedVertex)]

    def slot_role(self, node_idx: int, slot: int) -> str:
        node = self.nodes[node_idx]
        if isinstance(node, Crossing):
            return _CROSSING_ROLES[node.sign][slot]
        flip = self.vertex_flips[node_idx]
        base_in = slot % 2 == 0
        return IN if base_in != flip else OUT


def is_classical(d: MarkedGraphDiagram) -> bool:
    return not d.vertices


def _validate(d: MarkedGraphDiagram) -> None:
    slots: dict[int, list[tuple[int, int]]] = {}
    for idx, node in enumerate(d.nodes):
        if not isinstance(node, (Crossing, MarkedVertex)):
            raise ValidationError(f"node {idx}: unknown node type {node!r}")
        if isinstance(node, Crossing) and node.sign not in (1, -1):
            raise ValidationError(f"node {idx}: bad crossing sign {node.sign}")
        if len(node.he) != 4:
            raise ValidationError(f"node {idx}: expected 4 half-edges, got {len(node.he)}")
        for s, lbl in enumerate(node.he):
            if not isinstance(lbl, int) or lbl < 1:
                raise ValidationError(f"node {idx}: bad semiarc label {lbl!r}")
            slots.setdefault(lbl, []).append((idx, s))

    for lbl in d.free_loops:
        if not isinstance(lbl, int) or lbl < 1:
            raise ValidationError(f"free loop label {lbl!r} invalid")
        if lbl in slots:
            raise ValidationError(f"label {lbl} is both a free loop and attached to a node")
    if len(set(d.free_loops)) != len(d.free_loops):
        raise ValidationError("duplicate free loop label")

    for lbl, occ in slots.items():
        if len(occ) != 2:
            raise ValidationError(
                f"semiarc {lbl} appears {len(occ)} times among half-edges (4-regularity)"
            )
    object.__setattr__(d, "endpoints", {lbl: tuple(occ) for lbl, occ in slots.items()})
    object.__setattr__(d, "vertex_flips", _orient_vertices(d))
    _check_planarity(d)


def _orient_vertices(d: MarkedGraphDiagram) -> dict[int, bool]:
    """Infer the alternating in/out pattern at each marked vertex.

    Crossing slots carry fixed roles; every semiarc must leave one node
    and enter the other (a node-loop must leave and enter its node).
    Components not anchored by any crossing pick the pattern that makes
    their lowest vertex start with an incoming slot.
    """
    vertex_ids = [i for i, n in enumerate(d.nodes) if isinstance(n, MarkedVertex)]
    flips: dict[int, bool | None] = {i: None for i in vertex_ids}

    def base_in(slot):
        return slot % 2 == 0

    # constraints[v] entries: (other_vertex, parity) or fixed bool via `forced`
    forced: dict[int, bool] = {}
    parity: dict[int, list[tuple[int, bool]]] = {i: [] for i in vertex_ids}
    for lbl, ((n1, s1), (n2, s2)) in d.endpoints.items():
        c1 = isinstance(d.nodes[n1], Crossing)
        c2 = isinstance(d.nodes[n2], Crossing)
        if c1 and c2:
            r1 = _CROSSING_ROLES[d.nodes[n1].sign][s1]
            r2 = _CROSSING_ROLES[d.nodes[n2].sign][s2]
            if r1 == r2:
                raise ValidationError(f"semiarc {lbl}: both endpoints are {r1}-slots (orientation)")
        elif c1 or c2:
            (cn, cs), (vn, vs) = ((n1, s1), (n2, s2)) if c1 else ((n2, s2), (n1, s1))
            want_in = _CROSSING_ROLES[d.nodes[cn].sign][cs] == OUT
            # vertex slot role must be IN iff crossing side is OUT
            flip_needed = base_in(vs) != want_in
            if vn in forced and forced[vn] != flip_needed:
                raise ValidationError(f"semiarc {lbl}: conflicting orientation at vertex node {vn}")
            forced[vn] = flip_needed
        else:
            if n1 == n2:
                if base_in(s1) == base_in(s2):
                    raise ValidationError(f"semiarc {lbl}: loop at vertex node {n1} not orientable")
                continue
            # roles differ  <=>  flip1 xor flip2 == not (base1 xor base2)
            want = not (base_in(s1) != base_in(s2))
            parity[n1].append((n2, want))
            parity[n2].append((n1, want))

    for v in vertex_ids:
        if flips[v] is not None:
            continue
        root_val = forced.get(v, False)
        stack = [(v, root_val)]
        while stack:
            u, val = stack.pop()
            if flips[u] is not None:
                if flips[u] != val:
                    raise ValidationError(f"vertex node {u}: inconsistent source-sink orientation")
                continue
            if u in forced and forced[u] != val:
                raise ValidationError(f"vertex node {u}: orientation conflicts with a crossing")
            flips[u] = val
            for w, want in parity[u]:
                stack.append((w, val != want))
    return {v: bool(f) for v, f in flips.items()}


def _alpha(d: MarkedGraphDiagram, dart):
    n, s = dart
    lbl = d.nodes[n].he[s]
    (a, b) = d.endpoints[lbl]
    return b if (a == (n, s)) else a


def faces(d: MarkedGraphDiagram) -> list[tuple[tuple[int, int], ...]]:
    """Faces of the rotation system as dart cycles (free loops excluded)."""
    seen = set()
    out = []
    for n, node in enumerate(d.nodes):
        for s in range(4):
            dart = (n, s)
            if dart in seen:
                continue
            cycle = []
            cur = dart
            while cur not in seen:
                seen.add(cur)
                cycle.append(cur)
                an, asl = _alpha(d, cur)
                cur = (an, (asl + 1) % 4)
            out.append(tuple(cycle))
    return out


def graph_components(d: MarkedGraphDiagram) -> list[set[int]]:
    """Connected components of the node set (free loops excluded)."""
    if not d.nodes:
        return []
    adj = {i: set() for i in range(len(d.nodes))}
    for (n1, _s1), (n2, _s2) in d.endpoints.values():
        adj[n1].add(n2)
        adj[n2].add(n1)
    comps = []
    left = set(adj)
    while left:
        start = min(left)
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        comps.append(comp)
        left -= comp
    return comps


def _check_planarity(d: MarkedGraphDiagram) -> None:
    all_faces = faces(d)
    for comp in graph_components(d):
        v = len(comp)
        e = sum(1 for (n1, _), (_n2, _) in d.endpoints.values() if n1 in comp)
        f = sum(1 for fc in all_faces if fc[0][0] in comp)
        if v - e + f != 2:
            raise ValidationError(
                f"component containing node {min(comp)} is not planar (V-E+F = {v - e + f})"
            )


# ---------------------------------------------------------------------------
# strand structure


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        while p != self.parent[p]:
            self.parent[p] = self.parent[self.parent[p]]
            p = self.parent[p]
        if p != x:
            self.parent[x] = p
        return p

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def classes(self):
        groups = {}
        for x in list(self.parent):
            groups.setdefault(self.find(x), set()).add(x)
        return groups


def component_semiarcs(d: MarkedGraphDiagram) -> list[set[int]]:
    """Semiarc sets of the link components (saddles join all four legs)."""
    uf = _UnionFind()
    for lbl in d.endpoints:
        uf.find(lbl)
    for node in d.nodes:
        if isinstance(node, Crossing):
            uf.union(node.he[0], node.he[2])
            uf.union(node.he[1], node.he[3])
        else:
            uf.union(node.he[0], node.he[1])
            uf.union(node.he[1], node.he[2])
            uf.union(node.he[2], node.he[3])
    comps = [set(grp) for grp in uf.classes().values()]
    comps += [{lbl} for lbl in d.free_loops]
    return sorted(comps, key=min)


def components(d: MarkedGraphDiagram) -> int:
    """Number of components of the represented surface-link."""
    return len(component_semiarcs(d))


def smooth(d: MarkedGraphDiagram, direction: str) -> MarkedGraphDiagram:
    """Resolve every marked vertex into two arcs.

    ALONG_BARS joins slots (a, b) and (c, d); AGAINST_BARS joins (b, c)
    and (d, a).  Merged semiarcs keep the smallest label; chains closing
    up with no crossing contact become free loops.
    """
    if direction not in (ALONG_BARS, AGAINST_BARS):
        raise ValueError(f"direction must be {ALONG_BARS!r} or {AGAINST_BARS!r}")
    uf = _UnionFind()
    for lbl in d.endpoints:
        uf.find(lbl)
    for node in d.nodes:
        if isinstance(node, MarkedVertex):
            a, b, c, dd = node.he
            if direction == ALONG_BARS:
                uf.union(a, b)
                uf.union(c, dd)
            else:
                uf.union(b, c)
                uf.union(dd, a)

    new_nodes = []
    for node in d.nodes:
        if isinstance(node, Crossing):
            he = tuple(uf.find(lbl) for lbl in node.he)
            new_nodes.append(Crossing(node.sign, he))

    loops = list(d.free_loops)
    for grp in uf.classes().values():
        # a class with no crossing endpoint closed up into a circle
        if all(
            isinstance(d.nodes[n], MarkedVertex)
            for g in grp
            for (n, _s) in d.endpoints[g]
        ):
            loops.append(min(grp))
    return MarkedGraphDiagram(tuple(new_nodes), tuple(sorted(loops)))


def smoothed_circles(d: MarkedGraphDiagram, direction: str) -> list[set[int]]:
    """Circles of the smoothing, as sets of original semiarc labels."""
    uf = _UnionFind()
    for lbl in d.endpoints:
        uf.find(lbl)
    for node in d.nodes:
        if isinstance(node, Crossing):
            uf.union(node.he[0], node.he[2])
            uf.union(node.he[1], node.he[3])
        else:
            a, b, c, dd = node.he
            if direction == ALONG_BARS:
                uf.union(a, b)
                uf.union(c, dd)
            else:
                uf.union(b, c)
                uf.union(dd, a)
    circles = [set(grp) for grp in uf.classes().values()]
    circles += [{lbl} for lbl in d.free_loops]
    return sorted(circles, key=min)


def euler_characteristic(d: MarkedGraphDiagram) -> int:
    """Euler characteristic of the represented surface.

    chi = c(+) + c(-) - #saddles.  Raises NotAdmissible when the
    admissibility check definitely fails.
    """
    if check_admissible(d) == "No":
        raise NotAdmissible("diagram is not admissible")
    cp = len(smoothed_circles(d, ALONG_BARS))
    cm = len(smoothed_circles(d, AGAINST_BARS))
    return cp + cm - len(d.vertices)


def genus_profile(d: MarkedGraphDiagram) -> list[int]:
    """Genus of each link component, ordered by smallest semiarc label."""
    comps = component_semiarcs(d)
    out = []
    for comp in comps:
        saddles = sum(
            1
            for node in d.nodes
            if isinstance(node, MarkedVertex) and node.he[0] in comp
        )
        cp = sum(1 for circ in smoothed_circles(d, ALONG_BARS) if circ & comp)
        cm = sum(1 for circ in smoothed_circles(d, AGAINST_BARS) if circ & comp)
        chi = cp + cm - saddles
        out.append((2 - chi) // 2)
    return out


# ---------------------------------------------------------------------------
# admissibility

# small battery of dihedral-quandle counting invariants used to certify
# that a smoothing is NOT an unlink
_CERT_PRIMES = (3, 5, 7)


def _dihedral_biquandle(p: int):
    from .biquandle import verify_biquandle

    def rep(v):
        v %= p
        return v if v else p

    under = tuple(tuple(rep(2 * y - x) for y in range(1, p + 1)) for x in range(1, p + 1))
    over = tuple(tuple(x for _y in range(1, p + 1)) for x in range(1, p + 1))
    return verify_biquandle(under, over)


def check_admissible(d: MarkedGraphDiagram) -> str:
    """'Yes', 'No', or 'Unknown'.

    Yes when both smoothings reduce to crossingless diagrams under a
    bounded greedy Reidemeister search; No when a counting-invariant
    certificate shows a smoothing is not an unlink; Unknown otherwise.
    """
    from .moves import reduce_classical
    from .coloring import counting_invariant

    verdict = "Yes"
    for direction in (ALONG_BARS, AGAINST_BARS):
        s = smooth(d, direction)
        reduced = reduce_classical(s)
        if reduced.crossings:
            verdict = "Unknown"
            ncomp = components(s)
            for p in _CERT_PRIMES:
                X = _dihedral_biquandle(p)
                if counting_invariant(reduced, X) != p ** ncomp:
                    return "No"
    return verdict


# ---------------------------------------------------------------------------
# file format


def parse_mgd(text: str) -> MarkedGraphDiagram:
    """Parse the MGD text format (see module docstring)."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines:
        raise ParseError("empty diagram file")
    lineno, header = lines[0]
    if header != "mgd v1":
        raise ParseError(f"line {lineno}: expected header 'mgd v1', got {header!r}")
    nodes: list[Node] = []
    loops: list[int] = []
    for lineno, line in lines[1:]:
        words = line.split()
        kind, args = words[0], words[1:]
        try:
            vals = [int(w) for w in args]
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer label in {line!r}") from None
        if kind == "O":
            if len(vals) != 1:
                raise ParseError(f"line {lineno}: O takes one label")
            loops.append(vals[0])
        elif kind in ("X+", "X-", "V"):
            if len(vals) != 4:
                raise ParseError(f"line {lineno}: {kind} takes four labels")
            if kind == "V":
                nodes.append(MarkedVertex(tuple(vals)))
            else:
                nodes.append(Crossing(1 if kind == "X+" else -1, tuple(vals)))
        else:
            raise ParseError(f"line {lineno}: unknown record {kind!r}")
    try:
        return MarkedGraphDiagram(tuple(nodes), tuple(loops))
    except ValidationError:
        raise


def render_mgd(d: MarkedGraphDiagram) -> str:
    out = ["mgd v1"]
    for node in d.nodes:
        if isinstance(node, MarkedVertex):
            out.append("V " + " ".join(map(str, node.he)))
        else:
            out.append(("X+ " if node.sign > 0 else "X- ") + " ".join(map(str, node.he)))
    for lbl in d.free_loops:
        out.append(f"O {lbl}")
    return "\n".join(out) + "\n"
