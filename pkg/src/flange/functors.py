"""Matlis duality, (co)localization along faces, and the Top/Soc functors.

All constructions stay on the input box.  Boundary effects are handled by
the clamp-aware :meth:`GridModule.step`: an incoming map at the lower box
edge (or an outgoing one at the upper edge) is an identity, which is what an
explicitly padded box would show.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable

import numpy as np

from .exactlinalg import column_basis, kernel_basis, quotient_projection, solve
from .gridmod import (
    Degree,
    Face,
    GridModule,
    GridMorphism,
    canonical_degree,
    complement,
    faces,
    from_functions,
    _add,
    unit_vector,
)


class MultTable(Counter):
    """Multiplicities keyed by ``(face, canonical degree)``; zero entries are dropped."""

    def negated(self) -> "MultTable":
        return MultTable({(s, tuple(-x for x in a)): m for (s, a), m in self.items() if m})

    def restricted(self, keep) -> "MultTable":
        """Entries whose face satisfies the predicate ``keep``."""
        return MultTable({k: m for k, m in self.items() if m and keep(k[0])})

    def nonzero(self) -> "MultTable":
        return MultTable({k: m for k, m in self.items() if m})

    def records(self) -> list[dict]:
        return [{"face": [i + 1 for i in s], "degree": list(a), "mult": int(m)}
                for (s, a), m in sorted(self.items()) if m]


def _neg(d: Iterable[int]) -> Degree:
    return tuple(-x for x in d)


def matlis_dual(M: GridModule) -> GridModule:
    """Degreewise dual with negated grading: ``(M^v)_q = Hom(M_{-q}, k)``."""
    n = M.n
    box = M.box.negated()
    # the map q -> q + e_i of the dual is the transpose of M's map -q - e_i -> -q
    maps = []
    for i in range(n):
        e = unit_vector(n, i)
        maps.append({_neg(tuple(x + y for x, y in zip(d, e))): np.array(m.T, copy=True)
                     for d, m in M.maps[i].items()})
    dims = np.flip(M.dims, axis=tuple(range(n))).copy() if n else M.dims.copy()
    return GridModule(M.field, box, dims, maps)


def matlis_dual_morphism(f: GridMorphism) -> GridMorphism:
    """``f^v: N^v -> M^v`` with blocks transposed at negated degrees."""
    S, T = matlis_dual(f.target), matlis_dual(f.source)
    return GridMorphism(S, T, {_neg(d): np.array(b.T, copy=True) for d, b in f.blocks.items()})


def double_dual_unit(M: GridModule) -> GridMorphism:
    """The canonical comparison ``M -> (M^v)^v``.

    With standard bases the evaluation map of a finite-dimensional space into
    its double dual is the identity matrix; the constructor checks that the
    resulting family is well formed and :func:`naturality_violations` can
    confirm it commutes with the structure maps.
    """
    DD = matlis_dual(matlis_dual(M))
    return GridMorphism(M, DD, {d: M.field.eye(M.dim_at(d)) for d in M.points()})


def _raise(M: GridModule, d: Degree, sigma: Face) -> Degree:
    return tuple(M.box.high[i] if i in sigma else x for i, x in enumerate(d))


def _lower(M: GridModule, d: Degree, sigma: Face) -> Degree:
    return tuple(M.box.low[i] if i in sigma else x for i, x in enumerate(d))


def _pushed(M: GridModule, sigma: Face, up: bool) -> dict:
    return {d: (_raise if up else _lower)(M, d, sigma) for d in M.points()}


def localize(x, sigma: Face):
    """Localization along ``sigma``.

    For a module returns ``(M_sigma, unit)``; for a morphism returns the
    localized morphism.  The value at ``d`` is the stabilized colimit, i.e.
    ``M`` at ``d`` with the sigma-coordinates pushed to the top of the box.
    """
    sigma = tuple(sorted(sigma))
    if isinstance(x, GridMorphism):
        S, _ = localize(x.source, sigma)
        T, _ = localize(x.target, sigma)
        up = _pushed(x.source, sigma, True)
        return GridMorphism(S, T, {d: x.blocks[u] for d, u in up.items()})
    M = x
    F = M.field
    up = _pushed(M, sigma, True)

    def step(d, i):
        if i in sigma:
            return F.eye(M.dim_at(up[d]))
        return M.maps[i][up[d]]

    L = from_functions(F, M.box, lambda d: M.dim_at(up[d]), step)
    unit = GridMorphism(M, L, {d: M.transition(d, u) for d, u in up.items()})
    return L, unit


def colocalize(x, sigma: Face):
    """Colocalization ``Hom(R_sigma, -)`` along ``sigma``.

    For a module returns ``(M^sigma, counit)``; for a morphism returns the
    colocalized morphism.  The value at ``d`` is the stabilized limit, i.e.
    ``M`` at ``d`` with the sigma-coordinates pushed to the bottom of the box.
    """
    sigma = tuple(sorted(sigma))
    if isinstance(x, GridMorphism):
        S, _ = colocalize(x.source, sigma)
        T, _ = colocalize(x.target, sigma)
        down = _pushed(x.source, sigma, False)
        return GridMorphism(S, T, {d: x.blocks[u] for d, u in down.items()})
    M = x
    F = M.field
    down = _pushed(M, sigma, False)

    def step(d, i):
        if i in sigma:
            return F.eye(M.dim_at(down[d]))
        return M.maps[i][down[d]]

    C = from_functions(F, M.box, lambda d: M.dim_at(down[d]), step)
    counit = GridMorphism(C, M, {d: M.transition(u, d) for d, u in down.items()})
    return C, counit


# Socle and top are computed as sub/quotient data of (co)localizations; the
# helpers below return the module together with the per-point bases so that
# the functors can also be applied to morphisms.

def _socle_data(M: GridModule, sigma: Face):
    L, _ = localize(M, sigma)
    F = M.field
    perp = complement(sigma, M.n)
    bases, by_slice = {}, {}
    for d in L.points():
        # constant along sigma: compute once per slice point
        key = _lower(M, d, sigma)
        if key not in by_slice:
            k = L.dim_at(d)
            if perp and k:
                stacked = np.concatenate([L.step(d, i) for i in perp], axis=0)
                by_slice[key] = kernel_basis(stacked, F)
            else:
                by_slice[key] = F.eye(k) if not perp else F.zeros(0, 0)
        bases[d] = by_slice[key]

    def step(d, i):
        if i in sigma:
            return F.eye(bases[d].shape[1])
        d2 = _add(d, unit_vector(M.n, i))
        return F.zeros(bases[d2].shape[1], bases[d].shape[1])

    S = from_functions(F, M.box, lambda d: bases[d].shape[1], step)
    return S, L, bases


def _top_data(M: GridModule, sigma: Face):
    C, _ = colocalize(M, sigma)
    F = M.field
    perp = complement(sigma, M.n)
    proj, sect, by_slice = {}, {}, {}
    for d in C.points():
        key = _lower(M, d, sigma)
        if key not in by_slice:
            k = C.dim_at(d)
            incoming = [C.step(_add(d, unit_vector(M.n, i, -1)), i) for i in perp]
            img = column_basis(np.concatenate(incoming, axis=1), F) if incoming and k else F.zeros(k, 0)
            by_slice[key] = quotient_projection(img, k, F)
        proj[d], sect[d] = by_slice[key]

    def step(d, i):
        if i in sigma:
            return F.eye(proj[d].shape[0])
        d2 = _add(d, unit_vector(M.n, i))
        return F.zeros(proj[d2].shape[0], proj[d].shape[0])

    T = from_functions(F, M.box, lambda d: proj[d].shape[0], step)
    return T, C, proj, sect


def soc_functor(x, sigma: Face):
    """``Soc_sigma = Hom(k(sigma), (-)_sigma)`` on a module or a morphism."""
    sigma = tuple(sorted(sigma))
    if isinstance(x, GridModule):
        return _socle_data(x, sigma)[0]
    f = x
    F = f.field
    S1, _, b1 = _socle_data(f.source, sigma)
    S2, _, b2 = _socle_data(f.target, sigma)
    Lf = localize(f, sigma)
    blocks = {d: solve(b2[d], F.matmul(Lf.blocks[d], b1[d]), F) for d in S1.points()}
    return GridMorphism(S1, S2, blocks)


def top_functor(x, sigma: Face):
    """``Top_sigma = k(sigma) (x) (-)^sigma`` on a module or a morphism."""
    sigma = tuple(sorted(sigma))
    if isinstance(x, GridModule):
        return _top_data(x, sigma)[0]
    f = x
    F = f.field
    T1, _, _, s1 = _top_data(f.source, sigma)
    T2, _, p2, _ = _top_data(f.target, sigma)
    Cf = colocalize(f, sigma)
    blocks = {d: F.matmul(p2[d], F.matmul(Cf.blocks[d], s1[d])) for d in T1.points()}
    return GridMorphism(T1, T2, blocks)


def _table_from(module: GridModule, sigma: Face, table: MultTable):
    # the functor values are constant along sigma: read one slice
    for d in module.points():
        if any(d[i] != module.box.low[i] for i in sigma):
            continue
        m = module.dim_at(d)
        if m:
            table[(sigma, canonical_degree(d, sigma))] += m


def top_table(M: GridModule) -> MultTable:
    """``(sigma, a) -> dim Top_sigma(M)_a`` over all faces."""
    table = MultTable()
    for sigma in faces(M.n):
        _table_from(top_functor(M, sigma), sigma, table)
    return table


def soc_table(M: GridModule) -> MultTable:
    """``(sigma, a) -> dim Soc_sigma(M)_a`` over all faces."""
    table = MultTable()
    for sigma in faces(M.n):
        _table_from(soc_functor(M, sigma), sigma, table)
    return table


def socle_bases(M: GridModule, sigma: Face):
    """Per-point socle bases inside ``(M_sigma)_d``; used to build injective hulls."""
    _, L, bases = _socle_data(M, tuple(sorted(sigma)))
    return L, bases
