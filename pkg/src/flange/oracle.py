"""Random module generators and brute-force single-parameter barcodes.

``barcode_1d`` uses nothing but ranks of composite structure maps, so it
shares no code path with :mod:`flange.resolve` and can serve as an
independent check of flange presentations.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .exactlinalg import F2, Field, inverse, rank
from .functors import matlis_dual
from .gridmod import (
    FLAT,
    INJECTIVE,
    Box,
    GridModule,
    GridMorphism,
    Summand,
    direct_sum,
    from_functions,
    image_of,
    rectangle_module,
    standard_module,
)
from .resolve import Report, flange_presentation

KINDS = ("random-presentation", "random-dual", "interval-sum", "random-flange",
         "flat-sum", "injective-sum")


class WrongDimension(ValueError):
    pass


@dataclass(frozen=True)
class GenParams:
    """Parameters of a random module; ``seed`` determines the output completely.

    ``width`` is the number of lattice points per axis of the box and
    ``max_dim`` bounds the number of generators / summands, which bounds the
    pointwise dimension for every kind except ``flat-sum`` and
    ``injective-sum`` (where it bounds the number of summands).
    """

    n: int = 2
    width: int = 4
    max_dim: int = 3
    p: int = 2
    seed: int = 0
    kind: str = "random-presentation"

    def __post_init__(self):
        if self.n < 1 or self.width < 2 or self.max_dim < 1:
            raise ValueError("n >= 1, width >= 2 and max_dim >= 1 are required")
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")


@dataclass
class Generated:
    module: GridModule
    # ground truth where the generator knows it: rectangles (closed, with
    # infinities) for interval-sum, summands for flat-/injective-sum
    rectangles: list | None = None
    summands: list | None = None


def _box(p: GenParams) -> Box:
    return Box((0,) * p.n, (p.width - 1,) * p.n)


def _random_summand(rng, kind: str, box: Box) -> Summand:
    n = box.n
    sigma = tuple(i for i in range(n) if rng.random() < 0.3)
    a = []
    for i in range(n):
        if kind == FLAT:
            a.append(int(rng.integers(box.low[i] + 1, box.high[i] + 1)))
        else:
            a.append(int(rng.integers(box.low[i], box.high[i])))
    return Summand(kind, sigma, tuple(a))


def _overlapping_injective(rng, flat: Summand, box: Box) -> Summand:
    # an injective summand meeting the support of ``flat``, so images are rarely zero
    sigma, b = [], []
    for i in range(box.n):
        start = box.low[i] if i in flat.sigma else flat.a[i]
        if start >= box.high[i] or rng.random() < 0.2:
            sigma.append(i)
            b.append(0)
        else:
            b.append(int(rng.integers(start, box.high[i])))
    return Summand(INJECTIVE, tuple(sigma), tuple(b))


def _random_rectangle(rng, box: Box):
    lo, hi = [], []
    for i in range(box.n):
        b = -math.inf if rng.random() < 0.25 else int(rng.integers(box.low[i] + 1, box.high[i] + 1))
        start = box.low[i] if b == -math.inf else b
        if rng.random() < 0.25 or start >= box.high[i]:
            d = math.inf
        else:
            d = int(rng.integers(start, box.high[i]))
        lo.append(b)
        hi.append(d)
    return tuple(lo), tuple(hi)


def random_presentation(p: GenParams):
    """A random presentation whose degrees lie in the interior of the generator box."""
    rng = np.random.default_rng(p.seed)
    return _random_presentation(rng, p, Field(p.p))


def _random_presentation(rng, p: GenParams, F: Field):
    from .pdio import Presentation

    box = _box(p)
    k = int(rng.integers(1, p.max_dim + 1))
    gens = [tuple(int(rng.integers(box.low[i] + 1, box.high[i] + 1)) for i in range(p.n))
            for _ in range(k)]
    rels = []
    for _ in range(int(rng.integers(0, 2 * k + 2))):
        deg = tuple(int(rng.integers(box.low[i] + 1, box.high[i] + 1)) for i in range(p.n))
        coeffs = F.random(rng, 1, k)[0]
        for j, g in enumerate(gens):
            if any(x > y for x, y in zip(g, deg)):
                coeffs[j] = 0
        rels.append((deg, [int(c) if F.p else c for c in coeffs]))
    return Presentation(p.n, p.p, gens, rels)


def _presentation_module(rng, p: GenParams, F: Field) -> GridModule:
    from .pdio import realize_presentation

    return realize_presentation(_random_presentation(rng, p, F))


def _flange_module(rng, p: GenParams, F: Field) -> GridModule:
    """Image of a random morphism from a flat sum to an injective sum."""
    box = _box(p)
    flats = [_random_summand(rng, FLAT, box) for _ in range(int(rng.integers(1, p.max_dim + 1)))]
    partners = [int(rng.integers(len(flats))) for _ in range(int(rng.integers(1, p.max_dim + 1)))]
    injs = [_overlapping_injective(rng, flats[j], box) for j in partners]
    coeff = F.random(rng, len(injs), len(flats))
    for r, j in enumerate(partners):
        if coeff[r, j] == 0:
            coeff[r, j] = 1
    S, _, _ = direct_sum([standard_module(s, box, F) for s in flats])
    T, _, _ = direct_sum([standard_module(s, box, F) for s in injs])
    blocks = {}
    for d in box.points():
        rows = [r for r, s in enumerate(injs) if s.contains(d)]
        cols = [c for c, s in enumerate(flats) if s.contains(d)]
        blocks[d] = np.array(coeff[np.ix_(rows, cols)], dtype=F.dtype).reshape(len(rows), len(cols))
    img, _, _ = image_of(GridMorphism(S, T, blocks))
    return img


def generate(p: GenParams) -> Generated:
    rng = np.random.default_rng(p.seed)
    F = Field(p.p)
    box = _box(p)
    if p.kind == "random-presentation":
        return Generated(_presentation_module(rng, p, F))
    if p.kind == "random-flange":
        return Generated(_flange_module(rng, p, F))
    if p.kind == "random-dual":
        base = _presentation_module(rng, p, F) if rng.random() < 0.5 else _flange_module(rng, p, F)
        return Generated(matlis_dual(base))
    if p.kind == "interval-sum":
        rects = [_random_rectangle(rng, box) for _ in range(int(rng.integers(1, p.max_dim + 1)))]
        M, _, _ = direct_sum([rectangle_module(lo, hi, box, F) for lo, hi in rects])
        return Generated(M, rectangles=rects)
    kind = FLAT if p.kind == "flat-sum" else INJECTIVE
    summands = [_random_summand(rng, kind, box) for _ in range(int(rng.integers(1, p.max_dim + 1)))]
    M, _, _ = direct_sum([standard_module(s, box, F) for s in summands])
    return Generated(M, summands=summands)


def random_module(p: GenParams) -> GridModule:
    return generate(p).module


def random_basis_change(M: GridModule, seed: int) -> GridModule:
    """An isomorphic copy of ``M`` under random pointwise changes of basis."""
    rng = np.random.default_rng(seed)
    F = M.field
    g = {}
    for d in M.points():
        k = M.dim_at(d)
        while True:
            A = F.random(rng, k, k)
            if rank(A, F) == k:
                break
        g[d] = A

    def step(d, i):
        d2 = tuple(x + (j == i) for j, x in enumerate(d))
        return F.matmul(g[d2], F.matmul(M.maps[i][d], inverse(g[d], F)))

    return from_functions(F, M.box, M.dim_at, step)


# -- barcodes -------------------------------------------------------------

Bar = tuple  # (left, right): half-open [left, right), ends may be -inf / +inf


def barcode_1d(M: GridModule) -> Counter:
    """Bars of a single-parameter module by inclusion-exclusion of ranks.

    A bar whose closed support ``[b, d]`` touches the lower (upper) box edge
    extends to ``-inf`` (``+inf``) under clamping.
    """
    if M.n != 1:
        raise WrongDimension(f"barcodes need n = 1, got n = {M.n}")
    lo, hi = M.box.low[0], M.box.high[0]
    F = M.field

    def r(i, j):
        return rank(M.transition((i,), (j,)), F) if M.dim((i,)) and M.dim((j,)) else 0

    bars = Counter()
    for b in range(lo, hi + 1):
        for d in range(b, hi + 1):
            m = r(b, d)
            if b > lo:
                m -= r(b - 1, d)
            if d < hi:
                m -= r(b, d + 1)
            if b > lo and d < hi:
                m += r(b - 1, d + 1)
            if m:
                left = b if b > lo else -math.inf
                right = d + 1 if d < hi else math.inf
                bars[(left, right)] += m
    return bars


def bars_of_rectangles(rects) -> Counter:
    """Ground-truth bars for n = 1 rectangles (closed ends) as half-open intervals."""
    return Counter((lo[0], hi[0] + 1) for lo, hi in rects)


def flange_matches_barcode(M: GridModule) -> Report:
    """Compare flange summands with bar endpoints.

    A bar ``[b, d)`` contributes the cover summand ``(flat, b, {})`` (or the
    line ``(flat, 0, {1})`` when ``b = -inf``) and the hull summand
    ``(injective, d - 1, {})`` (or ``(injective, 0, {1})`` when ``d = +inf``).
    """
    if M.n != 1:
        raise WrongDimension(f"barcodes need n = 1, got n = {M.n}")
    bars = barcode_1d(M)
    fp = flange_presentation(M)
    cover, hull = Counter(), Counter()
    for (b, d), m in bars.items():
        cover[Summand(FLAT, (0,), (0,)) if b == -math.inf else Summand(FLAT, (), (b,))] += m
        hull[Summand(INJECTIVE, (0,), (0,)) if d == math.inf else Summand(INJECTIVE, (), (d - 1,))] += m
    rep = Report("flange = barcode")
    rep.checks["cover summands = bar left ends"] = fp.cover.multiset() == cover
    rep.checks["hull summands = bar right ends"] = fp.hull.multiset() == hull
    return rep
