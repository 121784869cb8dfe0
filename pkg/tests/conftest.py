import math
import sys

import pytest

from flange.exactlinalg import F2
from flange.gridmod import FLAT, INJECTIVE, Box, Summand, direct_sum, rectangle_module, standard_module
from flange.oracle import GenParams, random_module

INF = math.inf


def line_box(lo, hi):
    return Box((lo,), (hi,))


def cube(n, lo, hi):
    return Box((lo,) * n, (hi,) * n)


def free(a, box, field=F2):
    """R(-a)."""
    return standard_module(Summand(FLAT, (), a), box, field)


def hull_of_k(a, box, field=F2):
    """E(k)(-a) = k[D_{a, {}}]."""
    return standard_module(Summand(INJECTIVE, (), a), box, field)


def simple(n, box=None, field=F2):
    """k at the origin."""
    box = box or cube(n, -1, 1)
    return rectangle_module((0,) * n, (0,) * n, box, field)


def interval(b, d, box, field=F2):
    """Single-parameter k[b, d) with d possibly +inf."""
    return rectangle_module((b,), (d - 1 if d != INF else INF,), box, field)


def dsum(*parts):
    return direct_sum(list(parts))[0]


def suite(count, kinds=("random-presentation", "random-dual", "interval-sum", "random-flange"),
          ns=(1, 2, 3), width=4, max_dim=3, p=2, offset=0):
    """A deterministic, varied list of random modules."""
    out = []
    for s in range(count):
        params = GenParams(n=ns[s % len(ns)], width=width, max_dim=max_dim, p=p,
                           seed=offset + s, kind=kinds[(s // len(ns)) % len(kinds)])
        out.append(random_module(params))
    return out


@pytest.fixture(scope="session")
def small_suite():
    return suite(24)


def only_morphism(M, N):
    """The unique nonzero morphism when Nat(M, N) is one-dimensional."""
    from flange.gridmod import nat_hom_basis

    basis = nat_hom_basis(M, N)
    assert len(basis) == 1
    return basis[0]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
