"""Acceptance suite: eleven end-to-end criteria, exact arithmetic, zero tolerance.

Run under pytest (one PASS/FAIL line per criterion is printed in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""

import functools
import itertools
import sys
import time
from collections import Counter
from pathlib import Path

import numpy as np
import pytest

from flange import cli
from flange.exactlinalg import F2
from flange.functors import double_dual_unit, matlis_dual, soc_table, top_table
from flange.gridmod import (
    FLAT,
    INJECTIVE,
    Box,
    Summand,
    faces,
    is_iso,
    naturality_violations,
    rectangle_module,
    standard_module,
)
from flange.oracle import KINDS, GenParams, flange_matches_barcode, generate, random_module, random_presentation
from flange.pdio import parse_grid, parse_presentation, serialize_grid, serialize_presentation
from flange.resolve import (
    flat_cover,
    injective_hull,
    minimal_flat_resolution,
    minimal_injective_resolution,
    verify_flat_cover,
    verify_injective_hull,
    verify_minimal_resolution,
)

FIXTURES = Path(__file__).parent / "fixtures"
RESULTS: dict[int, tuple[bool, str, float]] = {}


def random_suite(count, offset=0):
    """``count`` modules over F_2, n cycling through 1..3, box width 4, pointwise dim <= 3."""
    mods = []
    for s in range(count):
        kind = KINDS[(s // 3) % len(KINDS)]
        M = random_module(GenParams(n=1 + s % 3, width=4, max_dim=3, p=2, seed=offset + s, kind=kind))
        assert M.dims.max(initial=0) <= 3 and max(M.box.shape) <= 4
        mods.append(M)
    return mods


@functools.lru_cache(maxsize=None)
def shared_suite():
    return tuple(random_suite(100))


@functools.lru_cache(maxsize=None)
def hulls_and_covers():
    out = []
    for M in shared_suite():
        E, phi = injective_hull(M, check=False)
        C, f = flat_cover(M, check=False)
        out.append((M, E, phi, C, f))
    return tuple(out)


def _failures(items):
    bad = [i for i, ok in enumerate(items) if not ok]
    return not bad, f"{len(items) - len(bad)}/{len(items)} pass" + (f"; failing {bad[:10]}" if bad else "")


def criterion_1():
    """Double dual: the canonical M -> (M^v)^v is a natural isomorphism."""
    oks = []
    for M in shared_suite():
        unit = double_dual_unit(M)
        oks.append(is_iso(unit) and not naturality_violations(unit))
    return _failures(oks)


def criterion_2():
    """Standard objects: matlis_dual(k[U_{a,s}]) equals k[D_{-a,s}] as grid data."""
    rng = np.random.default_rng(2)
    oks = []
    for n in (1, 2, 3):
        box = Box((-3,) * n, (3,) * n)
        for sigma in faces(n):
            for _ in range(10):
                a = tuple(int(x) for x in rng.integers(-2, 3, size=n))
                flat = standard_module(Summand(FLAT, sigma, a), box, F2)
                inj = standard_module(Summand(INJECTIVE, sigma, tuple(-x for x in a)), box.negated(), F2)
                oks.append(matlis_dual(flat) == inj)
    return _failures(oks)


def criterion_3():
    """Injective hulls: phi is mono and Soc_s(phi) is an iso for every face."""
    return _failures([verify_injective_hull(phi).ok for _, _, phi, _, _ in hulls_and_covers()])


def criterion_4():
    """Flat covers: f is epi and Top_s(f) is an iso for every face."""
    return _failures([verify_flat_cover(f).ok for _, _, _, _, f in hulls_and_covers()])


def criterion_5():
    """Main duality: hull(M) summands = kind-swapped, negated summands of cover(M^v)."""
    oks = []
    for M, E, _, _, _ in hulls_and_covers():
        D = matlis_dual(M)
        C, f = flat_cover(D, check=False)
        oks.append(E.multiset() == Counter(s.dual() for s in C.summands)
                   and verify_flat_cover(f).ok
                   and C.table() == top_table(D))
    return _failures(oks)


def criterion_6():
    """Resolutions: injres(M) dualizes term by term to flatres(M^v); both minimal, length <= n."""
    oks = []
    for M in random_suite(50, offset=1000):
        inj = minimal_injective_resolution(M, check=False)
        flat = minimal_flat_resolution(matlis_dual(M), check=False)
        oks.append(
            [t.multiset() for t in flat.terms] == [Counter(s.dual() for s in t.summands) for t in inj.terms]
            and verify_minimal_resolution(inj).ok
            and verify_minimal_resolution(flat).ok
            and inj.length <= M.n and flat.length <= M.n)
    return _failures(oks)


def criterion_7():
    """Soc/Top tables: Soc_s(M)_a = Top_s(M^v)_{-a} for all faces."""
    return _failures([soc_table(M) == top_table(matlis_dual(M)).negated() for M in shared_suite()])


def criterion_8():
    """Flat decompositions: top_table of a sum of flat summands is its generating multiset."""
    oks = []
    for s in range(50):
        g = generate(GenParams(n=1 + s % 3, width=4, max_dim=4, seed=2000 + s, kind="flat-sum"))
        oks.append(top_table(g.module) == Counter((t.sigma, t.a) for t in g.summands))
    return _failures(oks)


def criterion_9():
    """One parameter: flange summands match barcode endpoints."""
    oks = []
    for s in range(500):
        M = random_module(GenParams(n=1, width=2 + s % 5, max_dim=3, seed=3000 + s,
                                    kind=KINDS[s % len(KINDS)]))
        oks.append(flange_matches_barcode(M).ok)
    return _failures(oks)


def criterion_10():
    """Koszul: the flat resolution of k has ranks binom(n, i) at the 0/1 degrees."""
    oks = []
    for n in (1, 2, 3):
        k = rectangle_module((0,) * n, (0,) * n, Box((-1,) * n, (1,) * n), F2)
        res = minimal_flat_resolution(k)
        expected = [Counter(Summand(FLAT, (), tuple(int(j in S) for j in range(n)))
                            for S in itertools.combinations(range(n), i)) for i in range(n + 1)]
        oks.append([t.multiset() for t in res.terms] == expected and verify_minimal_resolution(res).ok)
    return _failures(oks)


def criterion_11():
    """I/O: 1000 grid modules and 1000 presentations round-trip bit-exactly; CLI exit codes."""
    oks = []
    for s in range(1000):
        params = GenParams(n=1 + s % 3, width=2 + s % 3, max_dim=3, p=(2, 3, 0)[s % 3], seed=4000 + s,
                           kind=KINDS[s % len(KINDS)])
        M = random_module(params)
        text = serialize_grid(M)
        N = parse_grid(text)
        P = random_presentation(params)
        ptext = serialize_presentation(P)
        Q = parse_presentation(ptext)
        oks.append(N == M and serialize_grid(N) == text and Q == P and serialize_presentation(Q) == ptext)
    codes = []
    for path in sorted((FIXTURES / "malformed").iterdir()):
        codes.append(_quiet_cli(["verify", "--input", str(path)]) == cli.EXIT_USAGE)
    for path in sorted((FIXTURES / "valid").iterdir()):
        field = "3" if "f3" in path.name else "2"
        codes.append(_quiet_cli(["verify", "--input", str(path), "--field", field]) == cli.EXIT_OK)
    codes.append(_quiet_cli(["verify"]) == cli.EXIT_USAGE)
    ok_rt, detail_rt = _failures(oks)
    ok_cli, detail_cli = _failures(codes)
    return ok_rt and ok_cli, f"round trips {detail_rt}; exit codes {detail_cli}"


def _quiet_cli(argv):
    import contextlib
    import io

    with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
        return cli.main(argv + ["--output", "-"])


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 12)}


def run_criterion(i):
    t = time.perf_counter()
    ok, detail = CRITERIA[i]()
    RESULTS[i] = (ok, detail, time.perf_counter() - t)
    return ok, detail


@pytest.mark.parametrize("i", list(CRITERIA))
def test_criterion(i):
    ok, detail = run_criterion(i)
    assert ok, f"criterion {i}: {detail}"


def summary_lines():
    return [f"criterion {i:2d} {'PASS' if ok else 'FAIL'}  ({dt:5.1f}s)  "
            f"{CRITERIA[i].__doc__.splitlines()[0]}  [{detail}]"
            for i, (ok, detail, dt) in sorted(RESULTS.items())]


if __name__ == "__main__":
    for i in CRITERIA:
        run_criterion(i)
        print(summary_lines()[-1], flush=True)
    sys.exit(0 if all(ok for ok, _, _ in RESULTS.values()) else 1)
