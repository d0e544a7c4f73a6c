"""Bead-coloring systems and the module enhancement invariants.

For a fixed X-coloring f, beads live on saddle-merged semiarc classes
and satisfy one pair of linear relations per crossing.  In record slots
(a, b, c, d), with (x, y) the acting color pair:

* ``X+``:  t_xy B(a) + s_xy B(d) - B(c) = 0,   r_xy B(d) - B(b) = 0,
           (x, y) = (f(a), f(d))
* ``X-``:  t_xy B(c) + s_xy B(d) - B(a) = 0,   r_xy B(d) - B(b) = 0,
           (x, y) = (f(c), f(d))

so an ``X-`` crossing carries the inverted relations of an ``X+`` one,
read against the orientation; only inverses of t and r are ever needed.
On a kink both relations collapse to the diagonal rule out = r_xx in.
The count of bead colorings is the null-space size of the homogeneous
system, and the polynomial invariant collects u^count over all
X-colorings.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .biquandle import Biquandle
from .bqmodule import BiquandleModule
from .coloring import enumerate_colorings, semiarc_classes
from .mgd import Crossing, MarkedGraphDiagram
from .ring import ModMatrix, null_count


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class InvariantPolynomial:
    """Multiset of bead-coloring counts, as (exponent, multiplicity) pairs."""

    terms: tuple[tuple[int, int], ...]

    @staticmethod
    def from_counts(counts) -> "InvariantPolynomial":
        tally: dict[int, int] = {}
        for c in counts:
            tally[c] = tally.get(c, 0) + 1
        return InvariantPolynomial(tuple(sorted(tally.items())))

    @property
    def total_multiplicity(self) -> int:
        return sum(mult for _k, mult in self.terms)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, mult in self.terms:
            coeff = "" if mult == 1 else str(mult)
            if k == 0:
                parts.append(str(mult))
            elif k == 1:
                parts.append(f"{coeff}u")
            else:
                parts.append(f"{coeff}u^{k}")
        return " + ".join(parts)

    def to_json(self) -> list[list[int]]:
        return [[k, mult] for k, mult in self.terms]

    @staticmethod
    def parse(text: str) -> "InvariantPolynomial":
        """Inverse of render, for tests and golden files."""
        text = text.strip()
        if text == "0":
            return InvariantPolynomial(())
        terms = []
        for part in text.split("+"):
            part = part.strip()
            if "u" not in part:
                terms.append((0, int(part)))
                continue
            coeff, _, exp = part.partition("u")
            mult = int(coeff) if coeff else 1
            k = int(exp[1:]) if exp.startswith("^") else 1
            terms.append((k, mult))
        return InvariantPolynomial(tuple(sorted(terms)))


def bead_columns(d: MarkedGraphDiagram) -> tuple[dict[int, int], list[int]]:
    """Class map and the ordered list of bead variables (class reps)."""
    cls = semiarc_classes(d)
    reps = sorted(set(cls.values()))
    return cls, reps


def bead_system(d: MarkedGraphDiagram, f: dict[int, int], m: BiquandleModule) -> ModMatrix:
    """Homogeneous coloring matrix of the bead relations under coloring f.

    Rows come in crossing order, two per crossing; columns are the
    saddle-merged semiarc classes in increasing label order.
    """
    n = m.modulus.n
    cls, reps = bead_columns(d)
    col = {rep: i for i, rep in enumerate(reps)}
    rows = []
    for node in d.nodes:
        if not isinstance(node, Crossing):
            continue
        a, b, c, dd = node.he
        ca, cb, cc, cd = col[cls[a]], col[cls[b]], col[cls[c]], col[cls[dd]]
        if node.sign > 0:
            x, y = f[a], f[dd]
            out_ts, in_t = cc, ca
        else:
            x, y = f[c], f[dd]
            out_ts, in_t = ca, cc
        t, s, r = m.t_at(x, y), m.s_at(x, y), m.r_at(x, y)
        row1 = [0] * len(reps)
        row1[in_t] = (row1[in_t] + t) % n
        row1[cd] = (row1[cd] + s) % n
        row1[out_ts] = (row1[out_ts] - 1) % n
        rows.append(row1)
        row2 = [0] * len(reps)
        row2[cd] = (row2[cd] + r) % n
        row2[cb] = (row2[cb] - 1) % n
        rows.append(row2)
    return ModMatrix.from_rows(rows, m.modulus) if rows else ModMatrix.from_rows([[0] * len(reps)], m.modulus)


def bead_count(d: MarkedGraphDiagram, f: dict[int, int], m: BiquandleModule) -> int:
    """Number of bead colorings compatible with the X-coloring f."""
    _cls, reps = bead_columns(d)
    if not reps:
        return 1
    M = bead_system(d, f, m)
    return null_count(M)


def brute_force_bead_count(
    d: MarkedGraphDiagram, f: dict[int, int], m: BiquandleModule, cap: int = 10**7
) -> int:
    """Oracle: enumerate all bead assignments against the per-node rules."""
    n = m.modulus.n
    cls, reps = bead_columns(d)
    if n ** len(reps) > cap:
        raise TooLarge(f"{n}^{len(reps)} assignments exceed the cap")
    crossings = [node for node in d.nodes if isinstance(node, Crossing)]
    count = 0
    for values in itertools.product(range(n), repeat=len(reps)):
        beads = dict(zip(reps, values))

        def B(lbl):
            return beads[cls[lbl]]

        ok = True
        for node in crossings:
            a, b, c, dd = node.he
            if node.sign > 0:
                x, y = f[a], f[dd]
                lhs_in, lhs_out = a, c
            else:
                x, y = f[c], f[dd]
                lhs_in, lhs_out = c, a
            if (m.t_at(x, y) * B(lhs_in) + m.s_at(x, y) * B(dd) - B(lhs_out)) % n:
                ok = False
                break
            if (m.r_at(x, y) * B(dd) - B(b)) % n:
                ok = False
                break
        if ok:
            count += 1
    return count


def module_polynomial(
    d: MarkedGraphDiagram,
    X: Biquandle,
    m: BiquandleModule,
    threads: int | None = None,
) -> InvariantPolynomial:
    """The polynomial invariant: sum of u^(bead count) over X-colorings."""
    if m.base != X:
        raise ValueError("module is not over the given biquandle")
    colorings = enumerate_colorings(d, X)
    if threads is not None and threads > 1 and len(colorings) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = list(pool.map(lambda f: bead_count(d, f, m), colorings))
    else:
        counts = [bead_count(d, f, m) for f in colorings]
    return InvariantPolynomial.from_counts(counts)


def result_record(name, d, X, m, threads=None) -> dict:
    """The documented JSON result schema for one invariant computation."""
    import hashlib

    from .biquandle import render_biquandle
    from .bqmodule import render_module

    poly = module_polynomial(d, X, m, threads=threads)
    return {
        "diagram": name,
        "biquandle": hashlib.sha256(render_biquandle(X).encode()).hexdigest()[:12],
        "module": hashlib.sha256(render_module(m).encode()).hexdigest()[:12],
        "counting": poly.total_multiplicity,
        "polynomial": poly.to_json(),
    }
