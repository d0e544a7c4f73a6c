"""Biquandle modules [t, s, r] over Z_n and the search for them.

A module over a biquandle X assigns units t_xy, r_xy and elements s_xy
of Z_n to each pair of colors, subject to one kink condition and six
exchange conditions.  The search fills the matrices entry by entry,
checking every axiom instance as soon as its operands are known, which
prunes hard enough for the sizes in play (|X| <= 3, n <= 5).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .biquandle import Biquandle
from .ring import Modulus, NotAUnit


class DimensionMismatch(ValueError):
    pass


class ModuleAxiomError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        lines = ", ".join(f"{ax} at {w}" for ax, w in self.violations[:5])
        more = "" if len(self.violations) <= 5 else f" (+{len(self.violations) - 5} more)"
        super().__init__(f"not a biquandle module: {lines}{more}")


@dataclass(frozen=True)
class BiquandleModule:
    base: Biquandle
    modulus: Modulus
    t: tuple[tuple[int, ...], ...]
    s: tuple[tuple[int, ...], ...]
    r: tuple[tuple[int, ...], ...]

    def t_at(self, x: int, y: int) -> int:
        return self.t[x - 1][y - 1]

    def s_at(self, x: int, y: int) -> int:
        return self.s[x - 1][y - 1]

    def r_at(self, x: int, y: int) -> int:
        return self.r[x - 1][y - 1]


# Axiom instances, written as (lhs, rhs) index expressions.  u = under
# action, o = over action; all arithmetic mod n.

def _axiom_instances(X: Biquandle, x: int, y: int, z: int):
    u, o = X.under_op, X.over_op
    yield "iii.i", ("r", o(y, x), o(z, x)), ("r", x, z), ("r", u(x, y), o(z, y)), ("r", y, z)
    yield "iii.ii", ("r", u(x, z), u(y, z)), ("t", y, z), ("t", o(y, x), o(z, x)), ("r", x, y)
    yield "iii.iii", ("r", u(x, z), u(y, z)), ("s", y, z), ("s", o(y, x), o(z, x)), ("r", x, z)
    yield "iii.iv", ("t", u(x, z), u(y, z)), ("t", x, z), ("t", u(x, y), o(z, y)), ("t", x, y)
    yield "iii.v", ("s", u(x, z), u(y, z)), ("t", y, z), ("t", u(x, y), o(z, y)), ("s", x, y)


def module_violations(X: Biquandle, n, t, s, r) -> list[tuple[str, tuple]]:
    """Every violated axiom instance as (axiom id, witness (x, y[, z]))."""
    mod = n if isinstance(n, Modulus) else Modulus(int(n))
    N = mod.n
    k = X.size
    for name, mat in (("t", t), ("s", s), ("r", r)):
        if len(mat) != k or any(len(row) != k for row in mat):
            raise DimensionMismatch(f"{name} matrix is not {k}x{k}")
    t = tuple(tuple(v % N for v in row) for row in t)
    s = tuple(tuple(v % N for v in row) for row in s)
    r = tuple(tuple(v % N for v in row) for row in r)
    for name, mat in (("t", t), ("r", r)):
        for x in X.elements:
            for y in X.elements:
                if math.gcd(mat[x - 1][y - 1], N) != 1:
                    raise NotAUnit(f"{name}[{x}][{y}] = {mat[x - 1][y - 1]} is not a unit mod {N}")

    def at(sym, x, y):
        return {"t": t, "s": s, "r": r}[sym][x - 1][y - 1]

    bad = []
    for x in X.elements:
        if (t[x - 1][x - 1] + s[x - 1][x - 1]) % N != r[x - 1][x - 1]:
            bad.append(("i.i", (x,)))
    u, o = X.under_op, X.over_op
    for x, y, z in itertools.product(X.elements, repeat=3):
        for ax, l1, l2, r1, r2 in _axiom_instances(X, x, y, z):
            if (at(*l1) * at(*l2)) % N != (at(*r1) * at(*r2)) % N:
                bad.append((ax, (x, y, z)))
        lhs = (at("t", u(x, z), u(y, z)) * at("s", x, z) + at("s", u(x, z), u(y, z)) * at("s", y, z)) % N
        rhs = (at("s", u(x, y), o(z, y)) * at("r", y, z)) % N
        if lhs != rhs:
            bad.append(("iii.vi", (x, y, z)))
    return bad


_VIOLATION_CAP = 100


def verify_module(X: Biquandle, n, t, s, r) -> BiquandleModule:
    """Verify the axioms and return the module, else raise ModuleAxiomError."""
    mod = n if isinstance(n, Modulus) else Modulus(int(n))
    bad = module_violations(X, mod, t, s, r)
    if bad:
        raise ModuleAxiomError(bad[:_VIOLATION_CAP])
    N = mod.n
    return BiquandleModule(
        X,
        mod,
        tuple(tuple(v % N for v in row) for row in t),
        tuple(tuple(v % N for v in row) for row in s),
        tuple(tuple(v % N for v in row) for row in r),
    )


def find_modules(X: Biquandle, n, limit: int | None = None) -> list[BiquandleModule]:
    """All [t, s, r] modules over Z_n, lexicographic in (t, s, r) entries.

    Backtracking in row-major order over t, then s, then r; the diagonal
    of r is forced by the kink condition, and every axiom instance is
    checked as soon as its last operand is placed.
    """
    mod = n if isinstance(n, Modulus) else Modulus(int(n))
    N = mod.n
    k = X.size
    units = [v for v in range(N) if math.gcd(v, N) == 1]
    cells = (
        [("t", x, y) for x in range(k) for y in range(k)]
        + [("s", x, y) for x in range(k) for y in range(k)]
        + [("r", x, y) for x in range(k) for y in range(k)]
    )
    pos = {cell: i for i, cell in enumerate(cells)}

    # each constraint: (needed cells, checker); checked once all are set
    constraints = []
    for x in range(k):
        need = (("t", x, x), ("s", x, x), ("r", x, x))
        constraints.append(
            (need, lambda m, x=x: (m["t"][x][x] + m["s"][x][x]) % N == m["r"][x][x])
        )
    for x, y, z in itertools.product(X.elements, repeat=3):
        for ax, l1, l2, r1, r2 in _axiom_instances(X, x, y, z):
            need = tuple((sym, a - 1, b - 1) for sym, a, b in (l1, l2, r1, r2))
            constraints.append(
                (
                    need,
                    lambda m, l1=l1, l2=l2, r1=r1, r2=r2: (
                        m[l1[0]][l1[1] - 1][l1[2] - 1] * m[l2[0]][l2[1] - 1][l2[2] - 1]
                    ) % N
                    == (m[r1[0]][r1[1] - 1][r1[2] - 1] * m[r2[0]][r2[1] - 1][r2[2] - 1]) % N,
                )
            )
        u, o = X.under_op, X.over_op
        need6 = (
            ("t", u(x, z) - 1, u(y, z) - 1),
            ("s", x - 1, z - 1),
            ("s", u(x, z) - 1, u(y, z) - 1),
            ("s", y - 1, z - 1),
            ("s", u(x, y) - 1, o(z, y) - 1),
            ("r", y - 1, z - 1),
        )
        constraints.append(
            (
                need6,
                lambda m, x=x, y=y, z=z: (
                    m["t"][u(x, z) - 1][u(y, z) - 1] * m["s"][x - 1][z - 1]
                    + m["s"][u(x, z) - 1][u(y, z) - 1] * m["s"][y - 1][z - 1]
                )
                % N
                == (m["s"][u(x, y) - 1][o(z, y) - 1] * m["r"][y - 1][z - 1]) % N,
            )
        )

    by_last: list[list] = [[] for _ in cells]
    for need, fn in constraints:
        last = max(pos[c] for c in need)
        by_last[last].append(fn)

    m = {
        "t": [[None] * k for _ in range(k)],
        "s": [[None] * k for _ in range(k)],
        "r": [[None] * k for _ in range(k)],
    }
    out: list[BiquandleModule] = []

    def backtrack(i: int):
        if limit is not None and len(out) >= limit:
            return
        if i == len(cells):
            out.append(
                BiquandleModule(
                    X,
                    mod,
                    tuple(tuple(row) for row in m["t"]),
                    tuple(tuple(row) for row in m["s"]),
                    tuple(tuple(row) for row in m["r"]),
                )
            )
            return
        sym, x, y = cells[i]
        domain = units if sym in ("t", "r") else range(N)
        for v in domain:
            m[sym][x][y] = v
            if all(fn(m) for fn in by_last[i]):
                backtrack(i + 1)
            if limit is not None and len(out) >= limit:
                break
        m[sym][x][y] = None

    backtrack(0)
    return out


def parse_module(text: str, X: Biquandle) -> BiquandleModule:
    """Parse the module file format: `ring N` then t, s, r sections."""
    from .mgd import ParseError

    tokens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            tokens.append((lineno, line.split()))

    def fail(lineno, msg):
        raise ParseError(f"line {lineno}: {msg}")

    if not tokens:
        raise ParseError("empty module file")
    lineno, head = tokens[0]
    if len(head) != 2 or head[0] != "ring":
        fail(lineno, "expected 'ring N'")
    try:
        n = int(head[1])
    except ValueError:
        fail(lineno, f"bad ring size {head[1]!r}")
    k = X.size
    pos = 1
    mats = {}
    for section in ("t", "s", "r"):
        if pos >= len(tokens) or tokens[pos][1] != [section]:
            fail(tokens[min(pos, len(tokens) - 1)][0], f"expected section '{section}'")
        pos += 1
        rows = []
        for _ in range(k):
            if pos >= len(tokens):
                fail(tokens[-1][0], f"'{section}' matrix ends early")
            lineno, words = tokens[pos]
            if len(words) != k:
                fail(lineno, f"expected {k} entries, got {len(words)}")
            try:
                rows.append([int(w) for w in words])
            except ValueError:
                fail(lineno, f"non-integer entry in {words}")
            pos += 1
        mats[section] = rows
    if pos != len(tokens):
        fail(tokens[pos][0], "unexpected trailing content")
    return verify_module(X, n, mats["t"], mats["s"], mats["r"])


def render_module(m: BiquandleModule) -> str:
    lines = [f"ring {m.modulus.n}"]
    for name, mat in (("t", m.t), ("s", m.s), ("r", m.r)):
        lines.append(name)
        lines += [" ".join(map(str, row)) for row in mat]
    return "\n".join(lines) + "\n"
