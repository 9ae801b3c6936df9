"""Command line front end.

Exit codes: 0 success, 1 a checked identity or expectation failed, 2 usage
error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

from . import bilinear, bounds, graded_ring, presentations

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
FAMILIES = ("grassmann-mod2", "config-mod2", "config-int")


class UsageError(Exception):
    pass


def thread_limit() -> int:
    """Worker cap from ``PROJCFG_THREADS`` (default: CPU count)."""
    raw = os.environ.get("PROJCFG_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            logger.warning("ignoring non-integer PROJCFG_THREADS=%r", raw)
    return os.cpu_count() or 1


def write_output(text: str, path: str | None) -> None:
    """Print ``text``, or write it atomically to ``path``."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".projcfg-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(payload: dict) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, **payload}, indent=2, sort_keys=True) + "\n"


# -- ring -----------------------------------------------------------------

def _presentation(family: str, param: int, omit_ce: bool = False) -> graded_ring.Presentation:
    try:
        if family == "grassmann-mod2":
            return presentations.build_grassmann_mod2(param).presentation
        if family == "config-mod2":
            return presentations.build_unordered_config_mod2(param).presentation
        return presentations.build_integral(param, include_ce=not omit_ce).presentation
    except ValueError as exc:
        raise UsageError(str(exc)) from None


_ELEMENT_RE = re.compile(r"^[A-Za-z0-9_+\-*^() ]+$")


def _parse_element(p: graded_ring.Presentation, text: str) -> graded_ring.RingElement:
    if not _ELEMENT_RE.match(text):
        raise UsageError(f"bad element expression {text!r}")
    try:
        return p.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _describe(piece: graded_ring.GradedPiece) -> str:
    if piece.coefficient_mode == graded_ring.MOD2:
        dim = piece.structure
        return "0" if dim == 0 else ("F2" if dim == 1 else f"F2^{dim}")
    return piece.structure.describe()


def cmd_ring(args) -> int:
    p = _presentation(args.family, args.param, getattr(args, "omit_ce", False))
    bound = args.degree_bound if args.degree_bound is not None else p.degree_bound

    if args.ring_cmd == "build":
        text = _dump({"family": args.family, "param": args.param, "presentation": p.to_json_dict()})
        if args.dump_presentation:
            write_output(text, args.dump_presentation)
        write_output(text, args.output)
        return 0

    if args.ring_cmd == "height":
        x = _parse_element(p, args.element)
        try:
            h = graded_ring.height(x, bound)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if args.format == "json":
            write_output(_dump({
                "family": args.family, "param": args.param, "element": args.element,
                "degree_bound": bound, "height": h.height, "nilindex": h.nilindex,
                "status": h.status,
            }), args.output)
        else:
            write_output(f"height={h.height} nilindex={h.nilindex} status={h.status}\n", args.output)
        return 0

    if args.ring_cmd == "dims":
        degrees = [args.degree] if args.degree is not None else list(range(bound + 1))
        with ThreadPoolExecutor(max_workers=thread_limit()) as pool:
            pieces = list(pool.map(p.piece, degrees))
        if args.format == "json":
            names = [g.name for g in p.generators]
            write_output(_dump({
                "family": args.family, "param": args.param,
                "pieces": [pc.to_json_dict(names) for pc in pieces],
            }), args.output)
        elif args.degree is not None:
            write_output(_describe(pieces[0]) + "\n", args.output)
        else:
            write_output("".join(f"{pc.degree}: {_describe(pc)}\n" for pc in pieces), args.output)
        return 0

    if args.ring_cmd == "verify-relations":
        failures = []
        checks = []
        for rel in p.relation_elements():
            ok = graded_ring.is_zero(rel)
            checks.append((f"relation {rel}", ok))
        if p.coefficient_mode == graded_ring.MOD2:
            for rel in p.relation_elements():
                checks.append((f"Sq1({rel}) in ideal", graded_ring.is_zero(presentations.sq1(rel))))
        elif not getattr(args, "omit_ce", False):
            checks += presentations.nilpotency_identities(args.param)
        for name, ok in checks:
            if not ok:
                failures.append(name)
        lines = [f"{'ok  ' if ok else 'FAIL'} {name}\n" for name, ok in checks]
        write_output("".join(lines), args.output)
        if failures:
            for f in failures:
                print(f"failed: {f}", file=sys.stderr)
            return 1
        return 0
    raise UsageError(f"unknown ring command {args.ring_cmd}")


# -- bilinear ---------------------------------------------------------------

def _construct(kind: str, r: int) -> bilinear.BilinearMap:
    try:
        if kind == "real":
            return bilinear.real_poly_mult(r)
        return bilinear.complex_poly_mult(r)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_bilinear(args) -> int:
    mu = _construct(args.kind, args.r)
    if args.bilinear_cmd == "construct":
        write_output(_dump({"map": mu.to_json_dict()}), args.output)
        return 0

    if args.bilinear_cmd == "check":
        sym = bilinear.check_symmetric_bilinear(mu, trials=min(args.samples, 200), seed=args.seed)
        res = bilinear.nonsingularity_search(mu, args.samples, args.seed)
        report = {
            "construction": mu.construction, "r": mu.r, "n": mu.n,
            "samples": res.samples, "seed": args.seed, "symmetric_bilinear": sym,
            "result": res.result,
            "witnesses": [] if res.witness is None else [[[str(c) for c in v] for v in res.witness]],
        }
        if args.format == "json":
            write_output(_dump(report), args.output)
        else:
            write_output(f"symmetric_bilinear={sym} {res.result}\n", args.output)
        return 0 if sym and not res.found else 1

    if args.bilinear_cmd == "embed":
        try:
            rep = bilinear.sample_embedding(mu, args.samples, args.seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        ok = rep.ok and rep.antisymmetry_residual <= 1e-12 and rep.representative_residual <= 1e-12
        if args.format == "json":
            write_output(_dump(rep.to_json_dict()), args.output)
        else:
            write_output(
                f"construction={rep.construction} r={rep.r} target=R^{rep.target_dimension} "
                f"samples={rep.sample_count} seed={rep.seed}\n"
                f"antisymmetry max-residual={rep.antisymmetry_residual:.3e}\n"
                f"representative max-residual={rep.representative_residual:.3e}\n"
                f"min separation={rep.min_image_separation:.6g} mean={rep.mean_image_separation:.6g}\n",
                args.output,
            )
        return 0 if ok else 1
    raise UsageError(f"unknown bilinear command {args.bilinear_cmd}")


# -- bounds -----------------------------------------------------------------

def cmd_bounds(args) -> int:
    try:
        records = bounds.bounds_table(args.m_exp_max, engine_max_m=args.engine_max_m)
    except bounds.ChainInconsistency as exc:
        print(f"inconsistent chain: {exc}", file=sys.stderr)
        return 1
    write_output(bounds.format_table(records, args.format, seed=args.seed), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "json", "csv", "markdown"), default="text")
    common.add_argument("--output", default=None, help="write here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="projcfg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    ring = sub.add_parser("ring", help="presented cohomology rings")
    ring_sub = ring.add_subparsers(dest="ring_cmd", required=True)
    for name in ("build", "height", "verify-relations", "dims"):
        sp = ring_sub.add_parser(name, parents=[common])
        sp.add_argument("--family", choices=FAMILIES, required=True)
        sp.add_argument("--param", type=int, required=True, help="r for mod 2 families, m for config-int")
        sp.add_argument("--degree-bound", type=int, default=None)
        sp.add_argument("--omit-ce", action="store_true", help="drop the c*e relation (odd m)")
        if name == "build":
            sp.add_argument("--dump-presentation", default=None, metavar="PATH")
        if name == "height":
            sp.add_argument("--element", required=True)
        if name == "dims":
            sp.add_argument("--degree", type=int, default=None)
        sp.set_defaults(func=cmd_ring)

    bil = sub.add_parser("bilinear", help="nonsingular symmetric bilinear maps")
    bil_sub = bil.add_subparsers(dest="bilinear_cmd", required=True)
    for name in ("construct", "check", "embed"):
        sp = bil_sub.add_parser(name, parents=[common])
        sp.add_argument("--kind", choices=("real", "complex"), default="real")
        sp.add_argument("--r", type=int, required=True)
        if name != "construct":
            sp.add_argument("--samples", type=int, default=10_000)
        sp.set_defaults(func=cmd_bilinear)

    bnd = sub.add_parser("bounds", help="bound tables for E, N and I_as")
    bnd_sub = bnd.add_subparsers(dest="bounds_cmd", required=True)
    sp = bnd_sub.add_parser("table", parents=[common])
    sp.add_argument("--m-exp-max", type=int, default=2)
    sp.add_argument("--engine-max-m", type=int, default=bounds.ENGINE_MAX_M)
    sp.set_defaults(func=cmd_bounds, format="markdown")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    if getattr(args, "samples", 1) < 1:
        parser.error("--samples must be at least 1")
    if args.command == "bounds" and args.format == "text":
        args.format = "markdown"
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
