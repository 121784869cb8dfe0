"""Finitely determined persistence modules on Z^n and their morphisms.

A :class:`GridModule` stores vector-space dimensions and structure maps on a
finite box.  Its value at an arbitrary degree ``q`` is the value at
``clamp(q, box)``; every transition that stays inside one clamped point is
the identity.  Because clamping is order preserving this always defines a
functor ``Z^n -> Vect``, so the module is pointwise finite-dimensional by
construction.

Faces are sorted tuples of 0-based axis indices.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from .exactlinalg import (
    F2,
    Field,
    column_basis,
    kernel_basis,
    quotient_projection,
    rank,
    solve,
)

Degree = tuple[int, ...]
Face = tuple[int, ...]

FLAT = "flat"
INJECTIVE = "injective"


class BoxNotDetermining(ValueError):
    """The box is too small to determine the requested module by clamping."""


class BoxMismatch(ValueError):
    pass


def faces(n: int) -> list[Face]:
    """All faces of N^n, by size then lexicographically."""
    out: list[Face] = []
    for k in range(n + 1):
        out.extend(itertools.combinations(range(n), k))
    return out


def complement(sigma: Face, n: int) -> Face:
    return tuple(i for i in range(n) if i not in sigma)


def canonical_degree(a: Sequence[int], sigma: Face) -> Degree:
    """Representative of ``a + Z sigma`` with the sigma-coordinates zeroed."""
    return tuple(0 if i in sigma else int(x) for i, x in enumerate(a))


@functools.lru_cache(maxsize=None)
def unit_vector(n: int, i: int, sign: int = 1) -> Degree:
    return tuple(sign if j == i else 0 for j in range(n))


def _add(a: Degree, b: Degree) -> Degree:
    return tuple(x + y for x, y in zip(a, b))


@functools.lru_cache(maxsize=4096)
def _points(box: "Box") -> tuple[Degree, ...]:
    return tuple(itertools.product(*(range(lo, h + 1) for lo, h in zip(box.low, box.high))))


@functools.lru_cache(maxsize=4096)
def _step_pairs(box: "Box", i: int) -> tuple[tuple[Degree, Degree], ...]:
    """Pairs ``(d, d + e_i)`` with both ends in the box."""
    top = box.high[i]
    return tuple((d, d[:i] + (d[i] + 1,) + d[i + 1:]) for d in _points(box) if d[i] < top)


@dataclass(frozen=True)
class Box:
    low: Degree
    high: Degree

    def __post_init__(self):
        low = tuple(int(x) for x in self.low)
        high = tuple(int(x) for x in self.high)
        if len(low) != len(high):
            raise ValueError("box corners have different lengths")
        if any(lo > hi for lo, hi in zip(low, high)):
            raise ValueError(f"box low {low} is not <= high {high}")
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "high", high)

    @property
    def n(self) -> int:
        return len(self.low)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(h - lo + 1 for lo, h in zip(self.low, self.high))

    @property
    def size(self) -> int:
        return math.prod(self.shape)

    def points(self) -> Iterable[Degree]:
        """Lattice points in lexicographic order."""
        return _points(self)

    def contains(self, q: Sequence[int]) -> bool:
        return all(lo <= x <= h for x, lo, h in zip(q, self.low, self.high))

    def contains_box(self, other: "Box") -> bool:
        return self.contains(other.low) and self.contains(other.high)

    def clamp(self, q: Sequence[int]) -> Degree:
        if self.contains(q):
            return tuple(q)
        return tuple(min(max(x, lo), h) for x, lo, h in zip(q, self.low, self.high))

    def index(self, q: Degree) -> tuple[int, ...]:
        return tuple(x - lo for x, lo in zip(q, self.low))

    def hull(self, other: "Box") -> "Box":
        return Box(tuple(map(min, self.low, other.low)), tuple(map(max, self.high, other.high)))

    def negated(self) -> "Box":
        return Box(tuple(-h for h in self.high), tuple(-lo for lo in self.low))

    def translated(self, v: Sequence[int]) -> "Box":
        return Box(_add(self.low, tuple(v)), _add(self.high, tuple(v)))

    def padded(self, k: int) -> "Box":
        return Box(tuple(x - k for x in self.low), tuple(x + k for x in self.high))


@dataclass(frozen=True, order=True)
class Summand:
    """Indecomposable flat ``k[U_{a,sigma}]`` or injective ``k[D_{a,sigma}]``.

    ``a`` is stored with its sigma-coordinates zeroed.
    """

    kind: str
    sigma: Face
    a: Degree

    def __post_init__(self):
        if self.kind not in (FLAT, INJECTIVE):
            raise ValueError(f"unknown summand kind {self.kind!r}")
        sigma = tuple(sorted(set(int(i) for i in self.sigma)))
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "a", canonical_degree(self.a, sigma))

    def dual(self) -> "Summand":
        """The Matlis dual summand: kind swapped, degree negated."""
        kind = INJECTIVE if self.kind == FLAT else FLAT
        return Summand(kind, self.sigma, tuple(-x for x in self.a))

    def contains(self, q: Sequence[int]) -> bool:
        for i, (x, a) in enumerate(zip(q, self.a)):
            if i in self.sigma:
                continue
            if self.kind == FLAT and x < a:
                return False
            if self.kind == INJECTIVE and x > a:
                return False
        return True

    def rectangle(self) -> tuple[tuple[float, ...], tuple[float, ...]]:
        """Closed per-axis bounds of the support (with infinities)."""
        lo, hi = [], []
        for i, a in enumerate(self.a):
            if i in self.sigma:
                lo.append(-math.inf)
                hi.append(math.inf)
            elif self.kind == FLAT:
                lo.append(a)
                hi.append(math.inf)
            else:
                lo.append(-math.inf)
                hi.append(a)
        return tuple(lo), tuple(hi)


class GridModule:
    """A finitely determined persistence module given on a box.

    ``dims`` is an integer array of shape ``box.shape``.  ``maps[i]`` maps a
    point ``d`` with ``d + e_i`` in the box to the matrix of shape
    ``dim(d + e_i) x dim(d)``.
    """

    def __init__(self, field: Field, box: Box, dims, maps: Sequence[dict]):
        self.field = field
        self.box = box
        self.dims = np.asarray(dims, dtype=np.int64).reshape(box.shape)
        if len(maps) != box.n:
            raise ValueError("need one map dictionary per axis")
        self.maps = tuple(dict(m) for m in maps)
        self._dim = dict(zip(box.points(), self.dims.ravel().tolist()))
        dim = self._dim
        for i, mi in enumerate(self.maps):
            for d, d2 in _step_pairs(box, i):
                if d not in mi:
                    raise ValueError(f"missing structure map at {d} along axis {i + 1}")
                shape = (dim[d2], dim[d])
                if mi[d].shape != shape:
                    raise ValueError(f"structure map at {d} along axis {i + 1} has shape "
                                     f"{mi[d].shape}, expected {shape}")
        self._transitions: dict = {}

    def _step_points(self, i: int) -> list[Degree]:
        return [d for d, _ in _step_pairs(self.box, i)]

    @property
    def n(self) -> int:
        return self.box.n

    def points(self) -> Iterable[Degree]:
        return self.box.points()

    def dim_at(self, q: Degree) -> int:
        """Dimension at a point of the box (no clamping)."""
        return self._dim[q]

    def dim(self, q: Sequence[int]) -> int:
        v = self._dim.get(q) if type(q) is tuple else None
        return v if v is not None else self._dim[self.box.clamp(q)]

    def step(self, q: Sequence[int], i: int) -> np.ndarray:
        """Structure map from degree ``q`` to ``q + e_i``."""
        if type(q) is tuple:
            m = self.maps[i].get(q)
            if m is not None:
                return m
        cq = self.box.clamp(q)
        if q[i] < self.box.low[i] or q[i] >= self.box.high[i]:
            return self.field.eye(self.dim_at(cq))
        return self.maps[i][cq]

    def transition(self, q: Sequence[int], r: Sequence[int]) -> np.ndarray:
        """Structure map from ``q`` to ``r`` (requires ``q <= r``)."""
        key = (q, r)
        if type(q) is tuple and type(r) is tuple and key in self._transitions:
            return self._transitions[key]
        if any(x > y for x, y in zip(q, r)):
            raise ValueError(f"no transition from {tuple(q)} to {tuple(r)}")
        cq, cr = self.box.clamp(q), self.box.clamp(r)
        ckey = (cq, cr)
        if ckey in self._transitions:
            return self._transitions[ckey]
        mat = self.field.eye(self.dim_at(cq))
        cur = list(cq)
        for i in range(self.n):
            for _ in range(cq[i], cr[i]):
                mat = self.field.matmul(self.maps[i][tuple(cur)], mat)
                cur[i] += 1
        self._transitions[ckey] = mat
        return mat

    def is_zero(self) -> bool:
        return not self.dims.any()

    def total_dim(self) -> int:
        return int(self.dims.sum())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GridModule):
            return NotImplemented
        if self.field != other.field or self.box != other.box:
            return False
        if not np.array_equal(self.dims, other.dims):
            return False
        return all(np.array_equal(a[d], b[d]) for a, b in zip(self.maps, other.maps) for d in a)

    __hash__ = None

    def __repr__(self) -> str:
        return (f"GridModule(n={self.n}, p={self.field.p}, box={self.box.low}..{self.box.high}, "
                f"total_dim={self.total_dim()})")


class GridMorphism:
    """Degree-preserving morphism; ``blocks[d]`` has shape ``dim_target(d) x dim_source(d)``."""

    def __init__(self, source: GridModule, target: GridModule, blocks: dict):
        if source.box != target.box:
            raise BoxMismatch(f"source box {source.box} != target box {target.box}")
        if source.field != target.field:
            raise ValueError("source and target live over different fields")
        self.source = source
        self.target = target
        self.blocks = dict(blocks)
        for d in source.points():
            shape = (target.dim_at(d), source.dim_at(d))
            if d not in self.blocks:
                raise ValueError(f"missing block at {d}")
            if self.blocks[d].shape != shape:
                raise ValueError(f"block at {d} has shape {self.blocks[d].shape}, expected {shape}")

    @property
    def field(self) -> Field:
        return self.source.field

    @property
    def box(self) -> Box:
        return self.source.box

    def block(self, q: Sequence[int]) -> np.ndarray:
        return self.blocks[self.box.clamp(q)]

    def is_zero(self) -> bool:
        return not any(b.any() for b in self.blocks.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GridMorphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and all(np.array_equal(self.blocks[d], other.blocks[d]) for d in self.blocks))

    __hash__ = None

    def __repr__(self) -> str:
        return f"GridMorphism({self.source!r} -> {self.target!r})"


@dataclass(frozen=True)
class Violation:
    degree: Degree
    axes: tuple[int, int]  # 1-based

    def __str__(self) -> str:
        return f"square at {self.degree} along axes {self.axes} does not commute"


def validate(M: GridModule) -> list[Violation]:
    """Every non-commuting square of ``M``; an empty list means the data is valid."""
    out = []
    F = M.field
    for d in M.points():
        for i, j in itertools.combinations(range(M.n), 2):
            di, dj = _add(d, unit_vector(M.n, i)), _add(d, unit_vector(M.n, j))
            dij = _add(di, unit_vector(M.n, j))
            if not M.box.contains(dij):
                continue
            lhs = F.matmul(M.maps[j][di], M.maps[i][d])
            rhs = F.matmul(M.maps[i][dj], M.maps[j][d])
            if not np.array_equal(lhs, rhs):
                out.append(Violation(d, (i + 1, j + 1)))
    return out


def naturality_violations(f: GridMorphism) -> list[tuple[Degree, int]]:
    """Points and (1-based) axes where ``f`` fails to commute with the structure maps."""
    out = []
    F = f.field
    M, N = f.source, f.target
    for i in range(M.n):
        for d in M._step_points(i):
            d2 = _add(d, unit_vector(M.n, i))
            lhs = F.matmul(N.maps[i][d], f.blocks[d])
            rhs = F.matmul(f.blocks[d2], M.maps[i][d])
            if not np.array_equal(lhs, rhs):
                out.append((d, i + 1))
    return out


def from_functions(field: Field, box: Box, dim_fn, step_fn) -> GridModule:
    dims = np.array([dim_fn(d) for d in box.points()], dtype=np.int64).reshape(box.shape)
    maps = [{d: step_fn(d, i) for d, _ in _step_pairs(box, i)} for i in range(box.n)]
    return GridModule(field, box, dims, maps)


def zero_module(n: int, field: Field = F2, box: Box | None = None) -> GridModule:
    """The zero module; by default on the one-point box at the origin."""
    if box is None:
        box = Box((0,) * n, (0,) * n)
    return from_functions(field, box, lambda d: 0, lambda d, i: field.zeros(0, 0))


def rectangle_module(lo: Sequence[float], hi: Sequence[float], box: Box,
                     field: Field = F2) -> GridModule:
    """Indicator module of the closed rectangle ``prod [lo_i, hi_i]`` (ends may be infinite).

    Raises :class:`BoxNotDetermining` unless every finite lower end lies in
    ``(low_i, high_i]`` and every finite upper end in ``[low_i, high_i)``.
    """
    if len(lo) != box.n or len(hi) != box.n:
        raise ValueError("rectangle and box dimensions differ")
    for i in range(box.n):
        if lo[i] > hi[i]:
            raise ValueError(f"empty rectangle along axis {i + 1}")
        if math.isfinite(lo[i]) and not (box.low[i] < lo[i] <= box.high[i]):
            raise BoxNotDetermining(f"lower end {lo[i]} on axis {i + 1} needs "
                                    f"{box.low[i]} < end <= {box.high[i]}")
        if math.isfinite(hi[i]) and not (box.low[i] <= hi[i] < box.high[i]):
            raise BoxNotDetermining(f"upper end {hi[i]} on axis {i + 1} needs "
                                    f"{box.low[i]} <= end < {box.high[i]}")

    def inside(d):
        return all(a <= x <= b for x, a, b in zip(d, lo, hi))

    one = field.array([[1]])

    def step(d, i):
        a, b = inside(d), inside(_add(d, unit_vector(box.n, i)))
        if a and b:
            return one.copy()
        return field.zeros(int(b), int(a))

    return from_functions(field, box, lambda d: int(inside(d)), step)


def standard_module(s: Summand, box: Box, field: Field = F2) -> GridModule:
    """``k[U_{a,sigma}]`` (flat) or ``k[D_{a,sigma}]`` (injective) realized on ``box``."""
    lo, hi = s.rectangle()
    return rectangle_module(lo, hi, box, field)


def extend_box(M: GridModule, box: Box) -> GridModule:
    """The same persistence module re-encoded on a larger box."""
    if not box.contains_box(M.box):
        raise BoxMismatch(f"{box} does not contain {M.box}")
    if box == M.box:
        return M
    return from_functions(M.field, box, M.dim, M.step)


def extend_morphism(f: GridMorphism, box: Box) -> GridMorphism:
    S, T = extend_box(f.source, box), extend_box(f.target, box)
    return GridMorphism(S, T, {d: f.block(d) for d in box.points()})


def harmonize(modules: Sequence[GridModule]) -> list[GridModule]:
    """Extend all modules to the hull of their boxes."""
    if not modules:
        return []
    box = modules[0].box
    for M in modules[1:]:
        box = box.hull(M.box)
    return [extend_box(M, box) for M in modules]


def shift(M: GridModule, a: Sequence[int]) -> GridModule:
    """``M(a)``: the value at ``q`` is ``M`` at ``q + a``."""
    a = tuple(a)
    neg = tuple(-x for x in a)
    box = M.box.translated(neg)
    maps = [{_add(d, neg): m for d, m in mi.items()} for mi in M.maps]
    return GridModule(M.field, box, M.dims.copy(), maps)


def identity(M: GridModule) -> GridMorphism:
    return GridMorphism(M, M, {d: M.field.eye(M.dim_at(d)) for d in M.points()})


def zero_morphism(M: GridModule, N: GridModule) -> GridMorphism:
    return GridMorphism(M, N, {d: M.field.zeros(N.dim_at(d), M.dim_at(d)) for d in M.points()})


def compose(g: GridMorphism, f: GridMorphism) -> GridMorphism:
    """``g after f``."""
    if f.target.box != g.source.box or f.target.dims.tolist() != g.source.dims.tolist():
        raise BoxMismatch("morphisms are not composable")
    F = f.field
    return GridMorphism(f.source, g.target,
                        {d: F.matmul(g.blocks[d], f.blocks[d]) for d in f.blocks})


def add_morphisms(f: GridMorphism, g: GridMorphism) -> GridMorphism:
    F = f.field
    return GridMorphism(f.source, f.target, {d: F.add(f.blocks[d], g.blocks[d]) for d in f.blocks})


def direct_sum(parts: Sequence[GridModule], n: int | None = None, field: Field | None = None):
    """Biproduct of ``parts``: returns ``(sum, injections, projections)``.

    Boxes are first harmonized to their common hull.  The empty sum is the
    zero module, for which ``n`` (and optionally ``field``) must be given.
    """
    if not parts:
        if n is None:
            raise ValueError("empty direct sum needs n")
        return zero_module(n, field or F2), [], []
    fields = {P.field for P in parts}
    if len(fields) != 1:
        raise ValueError("direct summands live over different fields")
    F = parts[0].field
    parts = harmonize(parts)
    box = parts[0].box

    def step(d, i):
        return _block_diag(F, [P.maps[i][d] for P in parts])

    S = from_functions(F, box, lambda d: sum(P.dim_at(d) for P in parts), step)
    injections, projections = [], []
    for k, P in enumerate(parts):
        inj, proj = {}, {}
        for d in box.points():
            offset = sum(Q.dim_at(d) for Q in parts[:k])
            dk, total = P.dim_at(d), S.dim_at(d)
            m = F.zeros(total, dk)
            for j in range(dk):
                m[offset + j, j] = 1
            inj[d] = m
            proj[d] = np.array(m.T, copy=True)
        injections.append(GridMorphism(P, S, inj))
        projections.append(GridMorphism(S, P, proj))
    return S, injections, projections


def direct_sum_morphism(fs: Sequence[GridMorphism]) -> GridMorphism:
    """Block-diagonal morphism between the direct sums of sources and targets."""
    src, _, _ = direct_sum([f.source for f in fs])
    tgt, _, _ = direct_sum([f.target for f in fs])
    F = src.field
    box = src.box
    fs = [extend_morphism(f, box) for f in fs]
    return GridMorphism(src, tgt, {d: _block_diag(F, [f.blocks[d] for f in fs]) for d in box.points()})


def _block_diag(F: Field, mats: Sequence[np.ndarray]) -> np.ndarray:
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = F.zeros(rows, cols)
    r = c = 0
    for m in mats:
        out[r:r + m.shape[0], c:c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


def nat_hom_basis(M: GridModule, N: GridModule) -> list[GridMorphism]:
    """Basis of ``Nat(M, N)``, the kernel of the naturality constraints on the box."""
    M, N = harmonize([M, N])
    F = M.field
    pts = list(M.points())
    offsets, total = {}, 0
    for d in pts:
        offsets[d] = total
        total += N.dim_at(d) * M.dim_at(d)
    rows = []
    for i in range(M.n):
        for d in M._step_points(i):
            d2 = _add(d, unit_vector(M.n, i))
            a, b = M.dim_at(d), N.dim_at(d)
            a2, b2 = M.dim_at(d2), N.dim_at(d2)
            if b2 * a == 0:
                continue
            block = F.zeros(b2 * a, total)
            # vec_row(N_step X_d) - vec_row(X_d2 M_step)
            if b * a:
                block[:, offsets[d]:offsets[d] + b * a] = np.kron(N.maps[i][d], F.eye(a))
            if b2 * a2:
                block[:, offsets[d2]:offsets[d2] + b2 * a2] = F.neg(np.kron(F.eye(b2), M.maps[i][d].T))
            rows.append(block)
    if rows:
        K = kernel_basis(np.concatenate(rows, axis=0), F)
    else:
        K = F.eye(total)
    out = []
    for j in range(K.shape[1]):
        blocks = {}
        for d in pts:
            a, b = M.dim_at(d), N.dim_at(d)
            blocks[d] = np.array(K[offsets[d]:offsets[d] + a * b, j].reshape(b, a), copy=True)
        out.append(GridMorphism(M, N, blocks))
    return out


def kernel_of(f: GridMorphism):
    """Pointwise kernel: returns ``(K, mono)``."""
    F, M = f.field, f.source
    bases = {d: kernel_basis(f.blocks[d], F) for d in M.points()}
    K = _sub_module(M, bases)
    return K, GridMorphism(K, M, bases)


def image_of(f: GridMorphism):
    """Pointwise image: returns ``(I, epi from source, mono into target)``."""
    F, N = f.field, f.target
    bases = {d: column_basis(f.blocks[d], F) for d in N.points()}
    I = _sub_module(N, bases)
    epi = {d: solve(bases[d], f.blocks[d], F) for d in N.points()}
    return I, GridMorphism(f.source, I, epi), GridMorphism(I, N, bases)


def _sub_module(M: GridModule, bases: dict) -> GridModule:
    F = M.field

    def step(d, i):
        d2 = _add(d, unit_vector(M.n, i))
        return solve(bases[d2], F.matmul(M.maps[i][d], bases[d]), F)

    return from_functions(F, M.box, lambda d: bases[d].shape[1], step)


def cokernel_of(f: GridMorphism):
    """Pointwise cokernel: returns ``(C, epi)``."""
    F, N = f.field, f.target
    proj, sect = {}, {}
    for d in N.points():
        img = column_basis(f.blocks[d], F)
        proj[d], sect[d] = quotient_projection(img, N.dim_at(d), F)

    def step(d, i):
        d2 = _add(d, unit_vector(N.n, i))
        return F.matmul(proj[d2], F.matmul(N.maps[i][d], sect[d]))

    C = from_functions(F, N.box, lambda d: proj[d].shape[0], step)
    return C, GridMorphism(N, C, proj)


def is_iso(f: GridMorphism) -> bool:
    for b in f.blocks.values():
        if b.shape[0] != b.shape[1] or rank(b, f.field) != b.shape[0]:
            return False
    return True


def is_mono(f: GridMorphism) -> bool:
    return all(rank(b, f.field) == b.shape[1] for b in f.blocks.values())


def is_epi(f: GridMorphism) -> bool:
    return all(rank(b, f.field) == b.shape[0] for b in f.blocks.values())


def dimension_vector(M: GridModule) -> dict[Degree, int]:
    """Dimensions on the box, in lexicographic point order."""
    return {d: M.dim_at(d) for d in M.points()}
