"""Presentation files, grid-module JSON, and input sniffing.

Presentation grammar (UTF-8, line based, ``#`` starts a comment, tokens are
whitespace separated)::

    pmod <n> <p>
    gens <k>
    <n integers>            # k generator degrees
    rels <m>
    <n integers> <k scalars>  # m relations: degree, then coefficients on gens

Grid JSON holds ``n``, ``p``, ``box.low``, ``box.high``, ``dims`` (lex point
order) and ``maps``: one list per axis of the matrices at the points ``d``
with ``d + e_i`` in the box (lex order), each matrix row-major.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactlinalg import Field
from .gridmod import (
    FLAT,
    Box,
    GridModule,
    GridMorphism,
    Summand,
    cokernel_of,
    direct_sum,
    standard_module,
    validate,
    zero_module,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0, expected: str = ""):
        self.line, self.column, self.expected = line, column, expected
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{where}{message}" + (f" (expected {expected})" if expected else ""))


class DegreeViolation(ParseError):
    pass


class SchemaError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass
class Presentation:
    n: int
    p: int
    gens: list
    rels: list  # (degree, coefficient row)

    def __post_init__(self):
        self.gens = [tuple(int(x) for x in g) for g in self.gens]
        self.rels = [(tuple(int(x) for x in d), list(c)) for d, c in self.rels]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Presentation):
            return NotImplemented
        return (self.n, self.p, self.gens) == (other.n, other.p, other.gens) and \
            [(d, [_scalar_text(x) for x in c]) for d, c in self.rels] == \
            [(d, [_scalar_text(x) for x in c]) for d, c in other.rels]


def _scalar_text(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(int(x))


def _tokens(text: str):
    """Yield ``(line_no, [(col, token), ...])`` for non-empty lines."""
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks, col = [], 0
        for part in line.split():
            col = line.index(part, col)
            toks.append((col + 1, part))
            col += len(part)
        if toks:
            yield ln, toks


def _int(tok, ln, what="integer"):
    col, t = tok
    try:
        return int(t)
    except ValueError:
        raise ParseError(f"bad token {t!r}", ln, col, what) from None


def _scalar(tok, ln, p):
    col, t = tok
    try:
        if p == 0:
            return Fraction(t)
        return int(t) % p
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad scalar {t!r}", ln, col, "field scalar") from None


def parse_presentation(text: str) -> Presentation:
    lines = list(_tokens(text))
    pos = 0
    last_line = len(text.splitlines()) + 1

    def next_line(expected):
        nonlocal pos
        if pos >= len(lines):
            raise ParseError("unexpected end of input", last_line, 1, expected)
        pos += 1
        return lines[pos - 1]

    def keyword(word, count):
        ln, toks = next_line(f"'{word}' line")
        if toks[0][1] != word:
            raise ParseError(f"found {toks[0][1]!r}", ln, toks[0][0], f"'{word}'")
        if len(toks) > count + 1:
            raise ParseError(f"'{word}' takes {count} argument(s)", ln, toks[count + 1][0], "end of line")
        if len(toks) < count + 1:
            col = toks[-1][0] + len(toks[-1][1])
            raise ParseError(f"'{word}' takes {count} argument(s)", ln, col, "another argument")
        return ln, toks[1:]

    ln, args = keyword("pmod", 2)
    n, p = _int(args[0], ln, "n"), _int(args[1], ln, "characteristic")
    if n < 1:
        raise ParseError("n must be positive", ln, args[0][0])
    try:
        Field(p)
    except ValueError:
        raise ParseError(f"characteristic {p} is not prime or 0", ln, args[1][0]) from None
    ln, args = keyword("gens", 1)
    k = _int(args[0], ln, "generator count")
    gens = []
    for _ in range(k):
        ln, toks = next_line("generator degree")
        if len(toks) != n:
            raise ParseError(f"generator degree has {len(toks)} entries", ln, toks[0][0], f"{n} integers")
        gens.append(tuple(_int(t, ln) for t in toks))
    ln, args = keyword("rels", 1)
    m = _int(args[0], ln, "relation count")
    rels = []
    for _ in range(m):
        ln, toks = next_line("relation row")
        if len(toks) != n + k:
            raise ParseError(f"relation row has {len(toks)} entries", ln, toks[0][0],
                             f"{n} degree integers and {k} scalars")
        deg = tuple(_int(t, ln) for t in toks[:n])
        coeffs = [_scalar(t, ln, p) for t in toks[n:]]
        for j, c in enumerate(coeffs):
            if c and any(g > d for g, d in zip(gens[j], deg)):
                raise DegreeViolation(f"relation at {deg} uses generator {j + 1} of degree {gens[j]}",
                                      ln, toks[n + j][0], "a generator below the relation degree")
        rels.append((deg, coeffs))
    if pos < len(lines):
        ln, toks = lines[pos]
        raise ParseError(f"trailing token {toks[0][1]!r}", ln, toks[0][0], "end of input")
    return Presentation(n, p, gens, rels)


def serialize_presentation(P: Presentation) -> str:
    out = [f"pmod {P.n} {P.p}", f"gens {len(P.gens)}"]
    out += [" ".join(str(x) for x in g) for g in P.gens]
    out.append(f"rels {len(P.rels)}")
    out += [" ".join([str(x) for x in d] + [_scalar_text(c) for c in cs]) for d, cs in P.rels]
    return "\n".join(out) + "\n"


def realize_presentation(P: Presentation) -> GridModule:
    """Pointwise cokernel of the relation map between free modules.

    The box runs from one below the smallest generator degree to the largest
    generator/relation degree, which is enough for every free summand to be
    determined by clamping.
    """
    F = Field(P.p)
    if not P.gens:
        return zero_module(P.n, F)
    degs = list(P.gens) + [d for d, _ in P.rels]
    # a zero relation may sit below every generator; keep it in the box too
    low = tuple(min(d[i] for d in degs) - 1 for i in range(P.n))
    high = tuple(max(d[i] for d in degs) for i in range(P.n))
    box = Box(low, high)
    gen_sum, _, _ = direct_sum([standard_module(Summand(FLAT, (), g), box, F) for g in P.gens], P.n, F)
    rel_sum, _, _ = direct_sum([standard_module(Summand(FLAT, (), d), box, F) for d, _ in P.rels], P.n, F)
    if rel_sum.box != box:
        rel_sum = zero_module(P.n, F, box)
    coeffs = F.array([[c for c in cs] for _, cs in P.rels]) if P.rels else None
    blocks = {}
    for d in box.points():
        rows = [j for j, g in enumerate(P.gens) if all(x <= y for x, y in zip(g, d))]
        cols = [r for r, (c, _) in enumerate(P.rels) if all(x <= y for x, y in zip(c, d))]
        if rows and cols:
            blocks[d] = np.array(coeffs[np.ix_(cols, rows)].T, dtype=F.dtype)
        else:
            blocks[d] = F.zeros(len(rows), len(cols))
    C, _ = cokernel_of(GridMorphism(rel_sum, gen_sum, blocks))
    return C


# -- grid JSON ------------------------------------------------------------

def _entry_json(x, p):
    if p == 0:
        x = Fraction(x)
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return int(x)


def grid_to_dict(M: GridModule) -> dict:
    p = M.field.p
    maps = []
    for i in range(M.n):
        maps.append([[[_entry_json(x, p) for x in row] for row in M.maps[i][d].tolist()]
                     for d in M._step_points(i)])
    return {
        "n": M.n,
        "p": p,
        "box": {"low": list(M.box.low), "high": list(M.box.high)},
        "dims": [M.dim_at(d) for d in M.points()],
        "maps": maps,
    }


def serialize_grid(M: GridModule) -> str:
    return json.dumps(grid_to_dict(M), sort_keys=True, separators=(",", ":")) + "\n"


def _need(obj, key, path, kind):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(path, f"missing field {key!r}")
    v = obj[key]
    if kind is int and (not isinstance(v, int) or isinstance(v, bool)):
        raise SchemaError(f"{path}.{key}", "expected an integer")
    if kind is list and not isinstance(v, list):
        raise SchemaError(f"{path}.{key}", "expected an array")
    return v


def _int_list(v, path, length=None):
    if not isinstance(v, list) or any(not isinstance(x, int) or isinstance(x, bool) for x in v):
        raise SchemaError(path, "expected an array of integers")
    if length is not None and len(v) != length:
        raise SchemaError(path, f"expected {length} entries, found {len(v)}")
    return v


def grid_from_dict(obj) -> GridModule:
    n = _need(obj, "n", "$", int)
    p = _need(obj, "p", "$", int)
    try:
        F = Field(p)
    except ValueError as e:
        raise SchemaError("$.p", str(e)) from None
    if n < 1:
        raise SchemaError("$.n", "must be positive")
    box_obj = _need(obj, "box", "$", dict)
    low = _int_list(_need(box_obj, "low", "$.box", list), "$.box.low", n)
    high = _int_list(_need(box_obj, "high", "$.box", list), "$.box.high", n)
    try:
        box = Box(tuple(low), tuple(high))
    except ValueError as e:
        raise SchemaError("$.box", str(e)) from None
    dims = _int_list(_need(obj, "dims", "$", list), "$.dims", box.size)
    if any(x < 0 for x in dims):
        raise SchemaError("$.dims", "dimensions must be nonnegative")
    dim_of = dict(zip(box.points(), dims))
    maps_obj = _need(obj, "maps", "$", list)
    if len(maps_obj) != n:
        raise SchemaError("$.maps", f"expected {n} axis lists, found {len(maps_obj)}")
    maps = []
    for i in range(n):
        hi = list(box.high)
        hi[i] -= 1
        pts = list(Box(box.low, tuple(hi)).points()) if hi[i] >= box.low[i] else []
        axis = maps_obj[i]
        path = f"$.maps[{i}]"
        if not isinstance(axis, list) or len(axis) != len(pts):
            raise SchemaError(path, f"expected {len(pts)} matrices")
        mi = {}
        for k, d in enumerate(pts):
            d2 = tuple(x + (j == i) for j, x in enumerate(d))
            rows, cols = dim_of[d2], dim_of[d]
            mp = f"{path}[{k}]"
            mat = axis[k]
            if not isinstance(mat, list) or len(mat) != rows or any(
                    not isinstance(r, list) or len(r) != cols for r in mat):
                raise SchemaError(mp, f"expected a {rows}x{cols} matrix")
            try:
                arr = F.array([[x if p else Fraction(x) for x in r] for r in mat] if rows else [],
                              shape=(rows, cols))
            except (ValueError, TypeError, ZeroDivisionError):
                raise SchemaError(mp, "entries must be field scalars") from None
            if p and any(not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < p
                         for r in mat for x in r):
                raise SchemaError(mp, f"entries must be integers in [0, {p})")
            mi[d] = arr
        maps.append(mi)
    M = GridModule(F, box, np.array(dims, dtype=np.int64).reshape(box.shape), maps)
    bad = validate(M)
    if bad:
        raise SchemaError("$.maps", f"{bad[0]} (and {len(bad) - 1} more)" if len(bad) > 1 else str(bad[0]))
    return M


def parse_grid(text: str) -> GridModule:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno, "valid JSON") from None
    return grid_from_dict(obj)


def load_module(text: str) -> GridModule:
    """Parse either format, sniffed from the first significant character."""
    stripped = "\n".join(line.split("#", 1)[0] for line in text.splitlines()).strip()
    if stripped.startswith("{"):
        return parse_grid(text)
    if stripped.startswith("pmod"):
        return realize_presentation(parse_presentation(text))
    raise ParseError("unrecognized input format", 1, 1, "grid JSON or a 'pmod' header")
