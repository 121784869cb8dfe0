"""Injective hulls, flat covers, minimal resolutions and their verifiers.

Injective hulls are built from socles: every basis vector of
``Soc_sigma(M)_a`` contributes one summand ``k[D_{a,sigma}]`` and the map
into it is a functional on ``(M_sigma)_a`` that restricts to the dual basis
on the socle.  Flat covers are never searched for directly; they are Matlis
duals of injective hulls of Matlis duals.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .exactlinalg import extend_to_basis, inverse, rank
from .functors import (
    MultTable,
    matlis_dual,
    matlis_dual_morphism,
    soc_functor,
    soc_table,
    socle_bases,
    top_functor,
    top_table,
)
from .gridmod import (
    FLAT,
    INJECTIVE,
    Face,
    GridModule,
    GridMorphism,
    Summand,
    canonical_degree,
    cokernel_of,
    compose,
    direct_sum,
    faces,
    image_of,
    is_epi,
    is_iso,
    is_mono,
    naturality_violations,
    standard_module,
    zero_module,
)


class PostconditionError(AssertionError):
    """A constructed hull, cover or resolution failed its own check (a bug, not bad input)."""


class LengthOverflow(PostconditionError):
    pass


@dataclass
class DecomposedModule:
    """A direct sum of standard summands together with its realization."""

    summands: tuple[Summand, ...]
    realization: GridModule
    injections: list = dc_field(default_factory=list, repr=False)
    projections: list = dc_field(default_factory=list, repr=False)

    @classmethod
    def build(cls, summands: Sequence[Summand], M: GridModule) -> "DecomposedModule":
        """Realize ``summands`` on the box of ``M`` (in the given order)."""
        parts = [standard_module(s, M.box, M.field) for s in summands]
        if not parts:
            return cls((), zero_module(M.n, M.field, M.box), [], [])
        S, inj, proj = direct_sum(parts)
        return cls(tuple(summands), S, inj, proj)

    def multiset(self) -> Counter:
        return Counter(self.summands)

    def table(self) -> MultTable:
        return MultTable(Counter((s.sigma, s.a) for s in self.summands))

    def dual(self) -> "DecomposedModule":
        """Matlis dual: realization dualized, every summand dualized."""
        return DecomposedModule(tuple(s.dual() for s in self.summands),
                                matlis_dual(self.realization),
                                [matlis_dual_morphism(p) for p in self.projections],
                                [matlis_dual_morphism(i) for i in self.injections])

    def __len__(self) -> int:
        return len(self.summands)


def _target_point(M: GridModule, s: Summand) -> tuple[int, ...]:
    # (M_sigma)_a lives at a with its sigma-coordinates pushed to the box top
    return tuple(M.box.high[i] if i in s.sigma else x for i, x in enumerate(s.a))


def _hull_functionals(M: GridModule):
    """Summands and functionals on ``(M_sigma)_a`` for the injective hull of ``M``."""
    F = M.field
    summands, functionals = [], []
    for sigma in faces(M.n):
        L, bases = socle_bases(M, sigma)
        for d in M.points():
            if any(d[i] != M.box.low[i] for i in sigma):
                continue
            K = bases[d]
            s = K.shape[1]
            if not s:
                continue
            full = np.concatenate([K, extend_to_basis(K, K.shape[0], F)], axis=1)
            dual_basis = inverse(full, F)[:s]
            a = canonical_degree(d, sigma)
            for j in range(s):
                summands.append(Summand(INJECTIVE, sigma, a))
                functionals.append(dual_basis[j:j + 1])
    return summands, functionals


def injective_hull(M: GridModule, check: bool = True):
    """Return ``(E0, phi)`` with ``phi: M -> E0.realization`` the injective hull."""
    F = M.field
    summands, functionals = _hull_functionals(M)
    E = DecomposedModule.build(summands, M)
    blocks = {}
    for d in M.points():
        rows = []
        for s, lam in zip(summands, functionals):
            if s.contains(d):
                rows.append(F.matmul(lam, M.transition(d, _target_point(M, s))))
        blocks[d] = np.concatenate(rows, axis=0) if rows else F.zeros(0, M.dim_at(d))
    phi = GridMorphism(M, E.realization, blocks)
    if check:
        report = verify_injective_hull(phi)
        if not report.ok:
            raise PostconditionError(f"injective hull failed its check: {report.failures()}")
    return E, phi


def flat_cover(M: GridModule, check: bool = True):
    """Return ``(F0, f)`` with ``f: F0.realization -> M`` the flat cover.

    Computed as the Matlis dual of the injective hull of ``M^v``.
    """
    E, phi = injective_hull(matlis_dual(M), check=False)
    cover = E.dual()
    f = matlis_dual_morphism(phi)
    # (M^v)^v has literally the same data as M; re-target onto M itself
    f = GridMorphism(f.source, M, f.blocks)
    if check:
        report = verify_flat_cover(f)
        if not report.ok:
            raise PostconditionError(f"flat cover failed its check: {report.failures()}")
    return cover, f


@dataclass
class Resolution:
    """A minimal resolution.

    Injective kind: ``0 -> M --augmentation--> E^0 --d^0--> E^1 -> ...``.
    Flat kind: ``... --d_2--> F_1 --d_1--> F_0 --augmentation--> M -> 0``;
    ``differentials[k]`` is ``d_{k+1}``.
    """

    kind: str
    module: GridModule
    augmentation: GridMorphism
    terms: list[DecomposedModule]
    differentials: list[GridMorphism]

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def tables(self) -> list[MultTable]:
        return [t.table() for t in self.terms]

    def ranks(self) -> list[int]:
        return [len(t) for t in self.terms]


def minimal_injective_resolution(M: GridModule, check: bool = True) -> Resolution:
    """Chain injective hulls of successive cokernels."""
    E, phi = injective_hull(M, check=check)
    terms, diffs = [E], []
    C, pi = cokernel_of(phi)
    while not C.is_zero():
        if len(terms) > M.n:
            raise LengthOverflow(f"injective resolution longer than n = {M.n}")
        E, psi = injective_hull(C, check=check)
        diffs.append(compose(psi, pi))
        terms.append(E)
        C, pi = cokernel_of(psi)
    return Resolution(INJECTIVE, M, phi, terms, diffs)


def minimal_flat_resolution(M: GridModule, check: bool = True) -> Resolution:
    """Term-by-term Matlis dual of the minimal injective resolution of ``M^v``."""
    inj = minimal_injective_resolution(matlis_dual(M), check=False)
    aug = matlis_dual_morphism(inj.augmentation)
    aug = GridMorphism(aug.source, M, aug.blocks)
    res = Resolution(FLAT, M, aug, [t.dual() for t in inj.terms],
                     [matlis_dual_morphism(d) for d in inj.differentials])
    if check:
        report = verify_minimal_resolution(res)
        if not report.ok:
            raise PostconditionError(f"flat resolution failed its check: {report.failures()}")
    return res


@dataclass
class FlangePresentation:
    cover: DecomposedModule
    hull: DecomposedModule
    composite: GridMorphism
    cover_map: GridMorphism
    hull_map: GridMorphism


def flange_presentation(M: GridModule) -> FlangePresentation:
    """Flat cover followed by injective hull; the image of the composite is ``M``."""
    cover, f = flat_cover(M)
    hull, phi = injective_hull(M)
    composite = compose(phi, f)
    img, _, _ = image_of(composite)
    if not np.array_equal(img.dims, M.dims):
        raise PostconditionError("image of the flange composite differs from M")
    return FlangePresentation(cover, hull, composite, f, phi)


@dataclass
class Report:
    """Named boolean checks; ``ok`` when all pass."""

    title: str
    checks: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]

    def to_dict(self) -> dict:
        return {"title": self.title, "ok": self.ok,
                "checks": [{"name": k, "pass": bool(v)} for k, v in self.checks.items()]}

    def __str__(self) -> str:
        lines = [f"{self.title}: {'PASS' if self.ok else 'FAIL'}"]
        lines += [f"  {'ok  ' if v else 'FAIL'} {k}" for k, v in self.checks.items()]
        return "\n".join(lines)


def _face_name(sigma: Face) -> str:
    return "{" + ",".join(str(i + 1) for i in sigma) + "}"


def verify_injective_hull(phi: GridMorphism) -> Report:
    """Check ``phi`` is natural, mono, and ``Soc_sigma(phi)`` is an iso for every face."""
    rep = Report("injective hull")
    rep.checks["natural"] = not naturality_violations(phi)
    rep.checks["mono"] = is_mono(phi)
    for sigma in faces(phi.source.n):
        rep.checks[f"Soc_{_face_name(sigma)} iso"] = is_iso(soc_functor(phi, sigma))
    return rep


def verify_flat_cover(f: GridMorphism) -> Report:
    """Check ``f`` is natural, epi, and ``Top_sigma(f)`` is an iso for every face."""
    rep = Report("flat cover")
    rep.checks["natural"] = not naturality_violations(f)
    rep.checks["epi"] = is_epi(f)
    for sigma in faces(f.source.n):
        rep.checks[f"Top_{_face_name(sigma)} iso"] = is_iso(top_functor(f, sigma))
    return rep


def _exact_at(F, before: np.ndarray, after: np.ndarray, dim: int) -> bool:
    if before.shape[1] and after.shape[0] and F.matmul(after, before).any():
        return False
    return rank(before, F) + rank(after, F) == dim


def verify_minimal_resolution(res: Resolution) -> Report:
    """Pointwise exactness plus vanishing of Top (flat) or Soc (injective) on every differential.

    The injective criterion ``Soc_sigma(d^i) = 0`` is the Matlis dual of the
    flat one.
    """
    rep = Report(f"minimal {res.kind} resolution")
    M = res.module
    F = M.field
    n = M.n
    rep.checks["length <= n"] = res.length <= n
    rep.checks["natural"] = all(not naturality_violations(g)
                                for g in [res.augmentation, *res.differentials])
    if res.kind == INJECTIVE:
        chain = [res.augmentation, *res.differentials]  # M -> E0 -> E1 -> ...
    else:
        chain = [*reversed(res.differentials), res.augmentation]  # F_k -> ... -> F_0 -> M
    exact = True
    for d in M.points():
        mats = [g.blocks[d] for g in chain]
        dims = [chain[0].source.dim_at(d)] + [g.target.dim_at(d) for g in chain]
        # 0 -> X_0 -> X_1 -> ... -> X_last -> 0
        full = [F.zeros(dims[0], 0)] + mats + [F.zeros(0, dims[-1])]
        for k in range(len(dims)):
            if not _exact_at(F, full[k], full[k + 1], dims[k]):
                exact = False
                break
        if not exact:
            break
    rep.checks["exact"] = exact
    rep.checks["augmentation " + ("mono" if res.kind == INJECTIVE else "epi")] = (
        is_mono(res.augmentation) if res.kind == INJECTIVE else is_epi(res.augmentation))
    functor = soc_functor if res.kind == INJECTIVE else top_functor
    name = "Soc" if res.kind == INJECTIVE else "Top"
    for k, g in enumerate(res.differentials):
        label = f"d^{k}" if res.kind == INJECTIVE else f"d_{k + 1}"
        for sigma in faces(n):
            rep.checks[f"{name}_{_face_name(sigma)}({label}) = 0"] = functor(g, sigma).is_zero()
    return rep


def summand_records(summands) -> list[dict]:
    return [{"kind": s.kind, "degree": list(s.a), "face": [i + 1 for i in s.sigma]}
            for s in sorted(summands)]
