"""Command-line interface: ``nilsub <command> [options]``.

Exit status is 0 on success, 1 when a verification check fails or a cover file
breaks a relation, and 2 when an input cannot be read or is invalid.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from nilsub import __version__
from nilsub.arfun import is_projective, tau, tau_orbit
from nilsub.catalog import find_entry, list_entries, tube_dimvectors, worked_examples, x_family
from nilsub.census import census, check_duality, verify_region
from nilsub.config import NilsubConfig
from nilsub.covering import dimvector, pi, shift, validate
from nilsub.errors import NilsubError, ParseError
from nilsub.exactla import Field
from nilsub.formats import (
    format_cover,
    format_dimvec,
    format_pair,
    parse_dimvec,
    read_cover,
    read_pair,
    write_cover,
    write_pair,
)
from nilsub.homalg import classify, decompose, end_algebra, hom, iso
from nilsub.kform import DimVector, chi, classify_region, h0, h_inf, iota, pi_k0, root_dimpair_table, t_support
from nilsub.nilmod import PairObject, dual
from nilsub.tracing import NilsubTracer, configure_logging
from nilsub.verify import CHECKS, VerifyContext, run_checks

logger = logging.getLogger(__name__)

_NAMED_VECTORS: Dict[str, Callable[[], DimVector]] = {"h0": h0, "h_inf": h_inf}


def _emit(args: argparse.Namespace, text: str, data: Any) -> None:
    if args.json:
        print(json.dumps(data, indent=2, default=str))
    else:
        print(text.rstrip("\n"))


def _field(args: argparse.Namespace) -> Field:
    return Field.parse(args.field)


def _read(args: argparse.Namespace, path: str) -> PairObject:
    return read_pair(path, _field(args) if args.field_given else None)


def parse_dimvec_arg(text: str) -> DimVector:
    """Parse ``h0``, ``h_inf``, a dimension vector, or a sum such as ``2*h0+h_inf``."""
    total = DimVector.zero()
    for term in text.replace(" ", "").split("+"):
        coeff, star, body = term.partition("*")
        if not star:
            coeff, body = "1", term
        if not coeff.isdigit():
            raise ParseError(f"bad coefficient in {term!r}")
        vec = _NAMED_VECTORS[body]() if body in _NAMED_VECTORS else parse_dimvec(body)
        total = total + int(coeff) * vec
    return total


# ---------------------------------------------------------------------------
# Commands


def cmd_decompose(args: argparse.Namespace) -> int:
    x = _read(args, args.pairfile)
    summands = decompose(x)
    labels = classify(summands)
    rows = [
        {"class": label, "v": s.v, "u": s.u, "partition": list(s.partition.parts)}
        for s, label in zip(summands, labels)
    ]
    lines = [f"{len(summands)} summands of {x.describe()}"]
    lines += [f"  class {r['class']}: dimpair ({r['v']},{r['u']}) partition {s.partition}" for r, s in zip(rows, summands)]
    _emit(args, "\n".join(lines), {"summands": rows})
    return 0


def cmd_hom(args: argparse.Namespace) -> int:
    x, y = _read(args, args.source), _read(args, args.target)
    dim = hom(x, y).dim
    _emit(args, f"dim Hom = {dim}", {"dim": dim})
    return 0


def cmd_iso(args: argparse.Namespace) -> int:
    x, y = _read(args, args.first), _read(args, args.second)
    same = iso(x, y, seed=args.seed)
    _emit(args, "isomorphic" if same else "NOT isomorphic", {"isomorphic": same})
    return 0


def _print_object(args: argparse.Namespace, x: PairObject) -> None:
    if args.out:
        write_pair(x, Path(args.out))
    _emit(args, format_pair(x), {"v": x.v, "u": x.u, "partition": list(x.partition.parts),
                                 "subspace": x.subspace.tolist()})


def cmd_dual(args: argparse.Namespace) -> int:
    _print_object(args, dual(_read(args, args.pairfile)))
    return 0


def cmd_tau(args: argparse.Namespace) -> int:
    x = _read(args, args.pairfile)
    if args.iterate is None:
        for _ in range(args.steps):
            x = tau(x)
        _print_object(args, x)
        return 0
    orbit = tau_orbit(x, args.iterate)
    rows = [
        {"step": i, "v": y.v, "u": y.u, "partition": list(y.partition.parts), "projective": is_projective(y)}
        for i, y in enumerate(orbit)
    ]
    lines = [
        f"{r['step']}  ({r['v']},{r['u']})  {y.partition}" + ("  projective" if r["projective"] else "")
        for r, y in zip(rows, orbit)
    ]
    stopped = len(orbit) <= args.iterate
    if stopped:
        lines.append(f"stopped at a projective after {len(orbit) - 1} steps")
    _emit(args, "\n".join(lines), {"orbit": rows, "stopped": stopped})
    return 0


def cmd_chi(args: argparse.Namespace) -> int:
    x = parse_dimvec_arg(args.dimvec)
    value = chi(x)
    _emit(args, str(value), {"dimvec": str(x), "chi": value, "t": t_support(x)})
    return 0


def cmd_iota(args: argparse.Namespace) -> int:
    x = parse_dimvec_arg(args.dimvec)
    zero, inf = iota(x)
    _emit(args, f"iota_0 = {zero}, iota_inf = {inf}", {"iota_0": zero, "iota_inf": inf})
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    x = parse_dimvec_arg(args.dimvec)
    label = classify_region(x)
    _emit(args, str(label), {"region": label.kind.value,
                             "gamma": None if label.gamma is None else str(label.gamma)})
    return 0


def cmd_pi(args: argparse.Namespace) -> int:
    if args.dimvec:
        pair = pi_k0(parse_dimvec_arg(args.dimvec))
        _emit(args, f"dimpair ({pair.v},{pair.u})", {"v": pair.v, "u": pair.u})
        return 0
    if not args.coverfile:
        raise ParseError("pi needs a cover file or --dimvec")
    r = read_cover(args.coverfile, _field(args) if args.field_given else None)
    logger.debug(f"cover {format_dimvec(dimvector(r))}")
    _print_object(args, pi(r))
    return 0


def cmd_cover(args: argparse.Namespace) -> int:
    r = read_cover(args.coverfile, _field(args) if args.field_given else None)
    if args.action == "validate":
        report = validate(r)
        kind = report.kind.value if report.kind is not None else None
        if report.ok:
            text = f"valid: {format_dimvec(dimvector(r))}"
        else:
            text = f"invalid: {kind} at index {report.index}: {report.message}"
        _emit(args, text, {"ok": report.ok, "kind": kind, "index": report.index,
                           "message": report.message})
        return 0 if report.ok else 1
    if args.action == "pi":
        _print_object(args, pi(r))
        return 0
    if args.ell is None:
        raise ParseError("cover shift needs a shift amount")
    shifted = shift(r, args.ell)
    if args.out:
        write_cover(shifted, Path(args.out))
    _emit(args, format_cover(shifted), {"lo": shifted.lo, "dimvec": format_dimvec(dimvector(shifted))})
    return 0


def cmd_census(args: argparse.Namespace) -> int:
    report = census(_field(args), args.n, args.dim, exhaustive=args.exhaustive,
                    deep=args.deep, jobs=args.jobs)
    if args.out:
        for path in report.write(Path(args.out)):
            logger.debug(f"wrote {path}")
    region = verify_region(report)
    data = report.to_dict()
    data["region_ok"] = region.ok
    data["duality_ok"] = check_duality(report)
    text = report.to_table() + f"# |v - 2u| <= n: {region.ok} (max {region.max_deviation})\n"
    _emit(args, text, data)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    names: Optional[List[str]] = None if args.checks == ["all"] else args.checks
    ctx = VerifyContext(seed=args.seed, jobs=args.jobs)
    results = run_checks(names, include_slow=not args.fast, ctx=ctx)
    text = "\n".join(r.format() for r in results)
    failed = [r.name for r in results if not r.ok]
    text += f"\n{len(results) - len(failed)}/{len(results)} checks passed"
    _emit(args, text, [r._asdict() for r in results])
    return 1 if failed else 0


def cmd_catalog(args: argparse.Namespace) -> int:
    field = _field(args)
    if args.action == "list":
        entries = list_entries(args.n, field)
        rows = [{"id": e.id, "v": e.expected.v, "u": e.expected.u, "dimvec": str(e.dimvec)} for e in entries]
        text = "\n".join(f"{r['id']}  ({r['v']},{r['u']})  {r['dimvec']}" for r in rows)
        _emit(args, text, rows)
    elif args.action == "show":
        if not args.id:
            raise ParseError("catalog show needs an entry id")
        entry = find_entry(args.id, field)
        print(f"# {entry.id}: {entry.provenance}")
        _print_object(args, entry.obj)
    elif args.action == "x":
        _print_object(args, x_family(field, field.parse_element(args.c)))
    elif args.action == "tubes":
        families = tube_dimvectors()
        text = "\n".join(f"{name} {x} chi={chi(x)}" for name, xs in families.items() for x in xs)
        _emit(args, text, {name: [str(x) for x in xs] for name, xs in families.items()})
    else:
        examples = worked_examples(field)
        text = "\n".join(f"{e.id}: {e.obj.describe()} dim End = {end_algebra(e.obj).dim}" for e in examples.values())
        _emit(args, text, {e.id: {"v": e.obj.v, "u": e.obj.u} for e in examples.values()})
    return 0


def cmd_roots(args: argparse.Namespace) -> int:
    table = root_dimpair_table()
    lines = [f"({v},{u})  count {count}  m {m}" for (v, u), count, m in table]
    lines.append(f"total {sum(count for _, count, _ in table)}")
    _emit(args, "\n".join(lines), [{"v": v, "u": u, "count": c, "m": m} for (v, u), c, m in table])
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    config = NilsubConfig.from_env()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default=None, help=f"prime p or Q (default: {config.default_field})")
    common.add_argument("--seed", type=int, default=config.seed, help="seed for randomized searches")
    common.add_argument("--json", action="store_true", help="structured output")
    common.add_argument("--verbose", action="store_true", help="debug logging")
    common.add_argument("--out", default=None, help="output file or directory")

    parser = argparse.ArgumentParser(prog="nilsub", description="Invariant subspaces of nilpotent operators.")
    parser.add_argument("--version", action="version", version=f"nilsub {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable[[argparse.Namespace], int], help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    add("decompose", cmd_decompose, "indecomposable summands of a pair file").add_argument("pairfile")
    p = add("hom", cmd_hom, "dimension of Hom between two pair files")
    p.add_argument("source")
    p.add_argument("target")
    p = add("iso", cmd_iso, "isomorphism test")
    p.add_argument("first")
    p.add_argument("second")
    add("dual", cmd_dual, "dual object").add_argument("pairfile")
    p = add("tau", cmd_tau, "Auslander-Reiten translate")
    p.add_argument("pairfile")
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--iterate", type=int, default=None, metavar="K", help="print the orbit of K steps")
    for name, func, help_text in (
        ("chi", cmd_chi, "quadratic form for n = 6"),
        ("iota", cmd_iota, "index functions for n = 6"),
        ("classify", cmd_classify, "region of a dimension vector"),
    ):
        add(name, func, help_text).add_argument("--dimvec", required=True)
    p = add("pi", cmd_pi, "covering functor on a cover file or a dimension vector")
    p.add_argument("coverfile", nargs="?")
    p.add_argument("--dimvec", default=None)
    p = add("cover", cmd_cover, "validate, push down or shift a cover file")
    p.add_argument("action", choices=["validate", "pi", "shift"])
    p.add_argument("coverfile")
    p.add_argument("ell", type=int, nargs="?")
    p = add("census", cmd_census, "enumerate indecomposables over a prime field")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--deep", action="store_true")
    p.add_argument("--jobs", type=int, default=None)
    p = add("verify", cmd_verify, "run acceptance checks")
    p.add_argument("checks", nargs="+", choices=["all", *CHECKS], metavar="all|" + "|".join(CHECKS))
    p.add_argument("--fast", action="store_true", help="skip slow checks")
    p.add_argument("--jobs", type=int, default=None)
    p = add("catalog", cmd_catalog, "named objects shipped with the package")
    p.add_argument("action", choices=["list", "show", "x", "tubes", "worked"])
    p.add_argument("id", nargs="?")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--c", default="0")
    add("roots", cmd_roots, "dimension pairs of the positive roots of E8")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.field_given = args.field is not None
    if not args.field_given:
        args.field = NilsubConfig.from_env().default_field
    configure_logging(args.verbose)
    tracer = NilsubTracer()
    try:
        with tracer.command_span(args.command, str(args.field), getattr(args, "n", None)):
            return int(args.func(args))
    except (NilsubError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyError as exc:
        print(f"error: unknown name {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
