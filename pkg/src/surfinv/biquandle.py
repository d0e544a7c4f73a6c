"""Finite biquandles: tables, axiom checking, standard constructors.

Elements are the labels 1..n everywhere, matching the usual operation
tables; `under[x-1][y-1]` holds x acted on by y from below and
`over[x-1][y-1]` from above.  Verification is exhaustive, which is fine
at the sizes that occur here (n <= 6 or so).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .ring import Modulus, invert


class MalformedTable(ValueError):
    """Operation table is not square or has an out-of-range entry."""


class NotAPermutation(ValueError):
    pass


class BiquandleAxiomError(ValueError):
    """Carries the full list of violated axiom instances."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = ", ".join(f"{ax} at {w}" for ax, w in self.violations[:5])
        more = "" if len(self.violations) <= 5 else f" (+{len(self.violations) - 5} more)"
        super().__init__(f"not a biquandle: {lines}{more}")


@dataclass(frozen=True)
class Biquandle:
    """A verified biquandle structure on {1..size}."""

    size: int
    under: tuple[tuple[int, ...], ...]
    over: tuple[tuple[int, ...], ...]

    def under_op(self, x: int, y: int) -> int:
        return self.under[x - 1][y - 1]

    def over_op(self, x: int, y: int) -> int:
        return self.over[x - 1][y - 1]

    @property
    def elements(self) -> range:
        return range(1, self.size + 1)


def _check_table_shape(table, size, name):
    if len(table) != size:
        raise MalformedTable(f"{name} table has {len(table)} rows, expected {size}")
    for i, row in enumerate(table):
        if len(row) != size:
            raise MalformedTable(f"{name} table row {i + 1} has {len(row)} entries, expected {size}")
        for j, v in enumerate(row):
            if not isinstance(v, int) or not 1 <= v <= size:
                raise MalformedTable(f"{name}[{i + 1}][{j + 1}] = {v!r} out of range 1..{size}")


def biquandle_violations(under, over) -> list[tuple[str, tuple]]:
    """All violated axiom instances of the candidate tables.

    Returns pairs (axiom id, witness tuple).  Table malformations raise
    MalformedTable instead of being reported here.
    """
    under = tuple(tuple(r) for r in under)
    over = tuple(tuple(r) for r in over)
    n = len(under)
    if n == 0:
        raise MalformedTable("empty table")
    _check_table_shape(under, n, "under")
    _check_table_shape(over, n, "over")

    def u(x, y):
        return under[x - 1][y - 1]

    def o(x, y):
        return over[x - 1][y - 1]

    bad = []
    rng = range(1, n + 1)
    for x in rng:
        if u(x, x) != o(x, x):
            bad.append(("i", (x,)))
    for x in rng:
        if len({o(y, x) for y in rng}) != n:
            bad.append(("ii.alpha", (x,)))
        if len({u(y, x) for y in rng}) != n:
            bad.append(("ii.beta", (x,)))
    if len({(o(y, x), u(x, y)) for x in rng for y in rng}) != n * n:
        bad.append(("ii.S", ()))
    for x, y, z in itertools.product(rng, repeat=3):
        if u(u(x, y), u(z, y)) != u(u(x, z), o(y, z)):
            bad.append(("iii.1", (x, y, z)))
        if o(u(x, y), u(z, y)) != u(o(x, z), o(y, z)):
            bad.append(("iii.2", (x, y, z)))
        if o(o(x, y), o(z, y)) != o(o(x, z), u(y, z)):
            bad.append(("iii.3", (x, y, z)))
    return bad


def verify_biquandle(under, over) -> Biquandle:
    """Verify the two tables and return the structure, else raise.

    Raises BiquandleAxiomError listing every violated axiom instance, or
    MalformedTable for shape problems.
    """
    violations = biquandle_violations(under, over)
    if violations:
        raise BiquandleAxiomError(violations)
    return Biquandle(len(under), tuple(tuple(r) for r in under), tuple(tuple(r) for r in over))


def constant_action_biquandle(sigma) -> Biquandle:
    """Biquandle with both operations x -> sigma(x), sigma a permutation of 1..n."""
    sigma = list(sigma)
    n = len(sigma)
    if sorted(sigma) != list(range(1, n + 1)):
        raise NotAPermutation(f"{sigma} is not a permutation of 1..{n}")
    table = tuple(tuple(sigma[x - 1] for _ in range(n)) for x in range(1, n + 1))
    return verify_biquandle(table, table)


def alexander_biquandle(n, t: int, s: int) -> Biquandle:
    """Alexander biquandle on Z_n: x acted below is t*x + (s-t)*y, above is s*x.

    Elements use representatives 1..n (with n standing for 0).  t and s
    must be units mod n.
    """
    m = n.n if isinstance(n, Modulus) else int(n)
    invert(t, m)  # raises NotAUnit when not invertible
    invert(s, m)

    def rep(v):
        v %= m
        return v if v else m

    under = tuple(tuple(rep(t * x + (s - t) * y) for y in range(1, m + 1)) for x in range(1, m + 1))
    over = tuple(tuple(rep(s * x) for _y in range(1, m + 1)) for x in range(1, m + 1))
    return verify_biquandle(under, over)


def parse_biquandle(text: str) -> Biquandle:
    """Parse the line-oriented biquandle file format.

    Format: `size N`, then `under` followed by N rows of N entries, then
    `over` likewise.  `#` starts a comment.
    """
    from .mgd import ParseError  # shared error type for file formats

    tokens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            tokens.append((lineno, line.split()))

    def fail(lineno, msg):
        raise ParseError(f"line {lineno}: {msg}")

    if not tokens:
        raise ParseError("empty biquandle file")
    lineno, head = tokens[0]
    if len(head) != 2 or head[0] != "size":
        fail(lineno, "expected 'size N'")
    try:
        n = int(head[1])
    except ValueError:
        fail(lineno, f"bad size {head[1]!r}")
    if n < 1:
        fail(lineno, "size must be >= 1")

    pos = 1
    tables = {}
    for section in ("under", "over"):
        if pos >= len(tokens):
            fail(tokens[-1][0], f"missing '{section}' section")
        lineno, words = tokens[pos]
        if words != [section]:
            fail(lineno, f"expected '{section}', got {' '.join(words)!r}")
        pos += 1
        rows = []
        for _ in range(n):
            if pos >= len(tokens):
                fail(tokens[-1][0], f"'{section}' table ends early")
            lineno, words = tokens[pos]
            if len(words) != n:
                fail(lineno, f"expected {n} entries, got {len(words)}")
            try:
                row = [int(w) for w in words]
            except ValueError:
                fail(lineno, f"non-integer entry in {words}")
            for v in row:
                if not 1 <= v <= n:
                    fail(lineno, f"entry {v} out of range 1..{n}")
            rows.append(tuple(row))
            pos += 1
        tables[section] = tuple(rows)
    if pos != len(tokens):
        fail(tokens[pos][0], "unexpected trailing content")
    return verify_biquandle(tables["under"], tables["over"])


def render_biquandle(X: Biquandle) -> str:
    lines = [f"size {X.size}", "under"]
    lines += [" ".join(map(str, row)) for row in X.under]
    lines.append("over")
    lines += [" ".join(map(str, row)) for row in X.over]
    return "\n".join(lines) + "\n"


# The two standard examples the computations revolve around.

def swap_biquandle() -> Biquandle:
    """The 2-element biquandle with both operations swapping 1 and 2."""
    return constant_action_biquandle([2, 1])


def three_element_biquandle() -> Biquandle:
    """The 3-element biquandle used for the Z_3 module computations."""
    under = ((2, 2, 2), (1, 1, 1), (3, 3, 3))
    over = ((2, 3, 1), (3, 1, 2), (1, 2, 3))
    return verify_biquandle(under, over)
