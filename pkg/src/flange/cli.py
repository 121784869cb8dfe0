"""Command line interface: ``flange <subcommand> --input FILE ...``.

Exit codes: 0 success, 1 verification failure, 2 parse or usage error,
3 internal postcondition failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

from .functors import matlis_dual, soc_table, top_table
from .gridmod import BoxNotDetermining, extend_box
from .oracle import KINDS, GenParams, WrongDimension, barcode_1d, flange_matches_barcode, random_module
from .pdio import ParseError, SchemaError, grid_to_dict, load_module, serialize_grid
from .resolve import (
    PostconditionError,
    flange_presentation,
    flat_cover,
    injective_hull,
    minimal_flat_resolution,
    minimal_injective_resolution,
    summand_records,
    verify_flat_cover,
    verify_injective_hull,
    verify_minimal_resolution,
)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

COMMANDS = ("dual", "hull", "cover", "injres", "flatres", "flange", "barcode",
            "soc", "top", "verify", "gen")


class UsageError(ValueError):
    pass


def _end(x):
    if x == math.inf:
        return "+inf"
    if x == -math.inf:
        return "-inf"
    return int(x)


def _resolution_dict(res) -> dict:
    rep = verify_minimal_resolution(res)
    return {
        "kind": res.kind,
        "length": res.length,
        "terms": [summand_records(t.summands) for t in res.terms],
        "verify": rep.to_dict(),
    }, rep.ok


def run_command(command: str, M) -> tuple[int, dict]:
    """Run one subcommand on one module; returns ``(exit_code, report)``."""
    ok = True
    if command == "dual":
        out = {"module": grid_to_dict(matlis_dual(M))}
    elif command == "hull":
        E, phi = injective_hull(M, check=False)
        rep = verify_injective_hull(phi)
        ok = rep.ok
        out = {"summands": summand_records(E.summands), "table": E.table().records(),
               "verify": rep.to_dict()}
    elif command == "cover":
        C, f = flat_cover(M, check=False)
        rep = verify_flat_cover(f)
        ok = rep.ok
        out = {"summands": summand_records(C.summands), "table": C.table().records(),
               "verify": rep.to_dict()}
    elif command == "injres":
        out, ok = _resolution_dict(minimal_injective_resolution(M, check=False))
    elif command == "flatres":
        out, ok = _resolution_dict(minimal_flat_resolution(M, check=False))
    elif command == "flange":
        fp = flange_presentation(M)
        out = {"cover": summand_records(fp.cover.summands), "hull": summand_records(fp.hull.summands)}
    elif command == "barcode":
        bars = barcode_1d(M)
        out = {"bars": [{"left": _end(b), "right": _end(d), "mult": m}
                        for (b, d), m in sorted(bars.items())]}
    elif command == "soc":
        out = {"table": soc_table(M).records()}
    elif command == "top":
        out = {"table": top_table(M).records()}
    elif command == "verify":
        E, phi = injective_hull(M, check=False)
        C, f = flat_cover(M, check=False)
        reports = [verify_injective_hull(phi), verify_flat_cover(f),
                   verify_minimal_resolution(minimal_injective_resolution(M, check=False)),
                   verify_minimal_resolution(minimal_flat_resolution(M, check=False))]
        if M.n == 1:
            reports.append(flange_matches_barcode(M))
        ok = all(r.ok for r in reports)
        out = {"ok": ok, "reports": [r.to_dict() for r in reports]}
    else:
        raise UsageError(f"unknown command {command!r}")
    return (EXIT_OK if ok else EXIT_VERIFY), out


def _process(job) -> tuple[int, dict]:
    command, path, field, pad = job
    try:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise UsageError(f"cannot read {path}: {e.strerror}") from None
        M = load_module(text)
        if field is not None and M.field.p != field:
            raise UsageError(f"{path} is over p = {M.field.p} but --field {field} was given")
        if pad:
            M = extend_box(M, M.box.padded(pad))
        code, out = run_command(command, M)
    except (ParseError, SchemaError, UsageError, BoxNotDetermining, WrongDimension) as e:
        return EXIT_USAGE, {"input": path, "error": type(e).__name__, "message": str(e)}
    except PostconditionError as e:
        return EXIT_INTERNAL, {"input": path, "error": type(e).__name__, "message": str(e)}
    out = {"input": path, **out}
    return code, out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="flange",
                                 description="Injective hulls, flat covers and minimal resolutions "
                                             "of finitely determined persistence modules.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--input", action="append", default=[],
                        help="grid JSON or presentation file (repeatable)")
        sp.add_argument("--field", type=int, default=None,
                        help="characteristic p (default 2 for gen; inputs must agree)")
        sp.add_argument("--output", default="-", help="report file, '-' for stdout")
        sp.add_argument("--box-pad", type=int, default=1,
                        help="extend every input box by this many units per side")
        sp.add_argument("--jobs", type=int, default=1, help="parallel workers for batch input")
        if name == "gen":
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--n", type=int, default=2)
            sp.add_argument("--width", type=int, default=4)
            sp.add_argument("--max-dim", type=int, default=3)
            sp.add_argument("--kind", choices=KINDS, default="random-presentation")
    return ap


def _write(text: str, dest: str):
    if dest == "-":
        sys.stdout.write(text)
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "gen":
        try:
            params = GenParams(n=args.n, width=args.width, max_dim=args.max_dim,
                               p=args.field if args.field is not None else 2,
                               seed=args.seed, kind=args.kind)
            M = random_module(params)
        except ValueError as e:
            print(f"flange: error: {e}", file=sys.stderr)
            return EXIT_USAGE
        _write(serialize_grid(M), args.output)
        return EXIT_OK
    if not args.input:
        print("flange: error: --input is required", file=sys.stderr)
        return EXIT_USAGE
    if args.box_pad < 0 or args.jobs < 1:
        print("flange: error: --box-pad must be >= 0 and --jobs >= 1", file=sys.stderr)
        return EXIT_USAGE
    jobs = [(args.command, path, args.field, args.box_pad) for path in args.input]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_process, jobs))
    else:
        results = [_process(j) for j in jobs]
    payload = results[0][1] if len(results) == 1 else [r for _, r in results]
    _write(json.dumps(payload, indent=2) + "\n", args.output)
    for code, out in results:
        if "error" in out:
            print(f"flange: {out['input']}: {out['message']}", file=sys.stderr)
    return max(code for code, _ in results)


if __name__ == "__main__":
    sys.exit(main())
