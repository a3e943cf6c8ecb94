"""Command-line front end.

Commands: decide, construct, verify, catalog, selftest.  Exit codes for
``decide``: 0 Exists, 3 NotExists, 2 Unknown, 1 usage or verification
error.  All other commands exit 0 on success and 1 on failure, with a
machine-readable JSON error on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalog import (
    ALL_KINDS,
    CATALOG_ROOT_ENV,
    build_catalog,
    catalog_root,
    load_catalog,
)
from .errors import VerificationError, ZsmagicError
from .groups import parse_group_spec
from .kotzig import (
    IntKotzigArray,
    KotzigArraySet,
    check_kas,
    kas,
    verify_int_kotzig,
)
from .mappings import (
    CmPartitionCertificate,
    check_cm_certificate,
    cm_two_group,
    cm_zero_sum_partition,
)
from .rectangles import (
    RectangleSet,
    Verdict,
    check_mrs,
    decide_existence,
    mrs_construct,
)
from .search import DEFAULT_BUDGET
from .serialize import dumps, load
from .zerosum import ZeroSumPartition, check_zero_sum_partition

_EXIT_BY_STATUS = {"Exists": 0, "Unknown": 2, "NotExists": 3}


def _emit(obj, out: str | None) -> None:
    text = dumps(obj)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _fail(message: str, locus: str | None = None) -> int:
    doc = {"error": message}
    if locus is not None:
        doc["locus"] = locus
    sys.stderr.write(json.dumps(doc, sort_keys=True) + "\n")
    return 1


def _cmd_decide(args) -> int:
    g = parse_group_spec(args.group)
    verdict = decide_existence(g, args.a, args.b, args.c)
    _emit(verdict, args.out)
    return _EXIT_BY_STATUS[verdict.status]


def _cmd_construct(args) -> int:
    g = parse_group_spec(args.group)
    if args.kind == "mrs":
        if args.a is None or args.b is None:
            return _fail("construct mrs requires -a and -b")
        c = args.c if args.c is not None else g.order // (args.a * args.b)
        obj = mrs_construct(g, args.a, args.b, c, args.budget)
    elif args.kind == "cm":
        if args.m is None and g.is_two_group:
            obj = cm_two_group(g, args.budget)
        else:
            obj = cm_zero_sum_partition(
                g, args.m, seed=args.seed, budget=args.budget
            )
    elif args.kind == "partition":
        from .zerosum import zero_sum_partition

        if args.m is None:
            return _fail("construct partition requires -m")
        obj = zero_sum_partition(g, args.m, seed=args.seed, budget=args.budget)
    elif args.kind == "kas":
        if args.m is None:
            return _fail("construct kas requires -m")
        obj = kas(g, args.rows, args.m, args.budget)
    else:  # pragma: no cover - argparse restricts choices
        return _fail(f"unknown kind {args.kind!r}")
    _emit(obj, args.out)
    return 0


def _check_loaded(obj) -> None:
    if isinstance(obj, CmPartitionCertificate):
        check_cm_certificate(obj)
    elif isinstance(obj, ZeroSumPartition):
        check_zero_sum_partition(obj)
    elif isinstance(obj, KotzigArraySet):
        check_kas(obj)
    elif isinstance(obj, IntKotzigArray):
        if not verify_int_kotzig(obj):
            raise VerificationError("int-kotzig")
    elif isinstance(obj, RectangleSet):
        check_mrs(obj)
    elif isinstance(obj, Verdict):
        if obj.status not in _EXIT_BY_STATUS:
            raise VerificationError("verdict-status")
    else:  # pragma: no cover - serialize only yields the kinds above
        raise VerificationError("unknown-kind")


def _cmd_verify(args) -> int:
    obj = load(args.path)
    try:
        _check_loaded(obj)
    except VerificationError as exc:
        return _fail(f"{args.path} fails verification", locus=exc.locus)
    sys.stdout.write(json.dumps({"verified": args.path}, sort_keys=True) + "\n")
    return 0


def _cmd_catalog(args) -> int:
    root = catalog_root(args.out)
    if args.load:
        entries = load_catalog(root)
        sys.stdout.write(
            json.dumps(
                {"root": str(root), "verified_entries": len(entries)},
                sort_keys=True,
            )
            + "\n"
        )
        return 0
    kinds = tuple(args.kinds.split(",")) if args.kinds else ALL_KINDS
    index = build_catalog(root, args.max_order, kinds, args.budget)
    summary = {
        "root": str(root),
        "counts": index["counts"],
        "unknown_verdicts": len(index["unknown_verdicts"]),
        "defects": index["defects"],
    }
    sys.stdout.write(json.dumps(summary, sort_keys=True) + "\n")
    return 0 if not index["defects"] else 1


def _cmd_selftest(args) -> int:
    g4 = parse_group_spec("Z2xZ2")
    check_cm_certificate(cm_two_group(g4))
    from .zerosum import zero_sum_partition

    check_zero_sum_partition(zero_sum_partition(parse_group_spec("Z9"), 3))
    check_kas(kas(parse_group_spec("Z2xZ2xZ2"), 3, 4))
    check_mrs(mrs_construct(parse_group_spec("Z3xZ2xZ2"), 3, 4, 1))
    for spec, a, b, c, status in (
        ("Z6", 3, 2, 1, "NotExists"),
        ("Z3xZ2xZ2", 3, 4, 1, "Exists"),
        ("Z3xZ8xZ2", 3, 8, 2, "Unknown"),
    ):
        got = decide_existence(parse_group_spec(spec), a, b, c).status
        if got != status:
            return _fail(f"selftest: {spec} ({a},{b};{c}) -> {got}")
    sys.stdout.write(json.dumps({"selftest": "ok"}, sort_keys=True) + "\n")
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zsmagic",
        description=(
            "Zero-sum partitions, complete mappings, Kotzig array sets "
            "and magic rectangle sets over finite Abelian groups."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, group=True):
        if group:
            p.add_argument("-g", "--group", required=True, help="group spec, e.g. Z3xZ2xZ2")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search node budget")
        p.add_argument("--seed", type=int, default=0, help="search tie-break seed")
        p.add_argument("--out", help="write the JSON result to this file")

    p = sub.add_parser("decide", help="existence verdict for a magic rectangle set")
    common(p)
    p.add_argument("-a", type=int, required=True, help="rows per rectangle")
    p.add_argument("-b", type=int, required=True, help="columns per rectangle")
    p.add_argument("-c", type=int, required=True, help="number of rectangles")
    p.set_defaults(run=_cmd_decide)

    p = sub.add_parser("construct", help="build and emit a verified certificate")
    p.add_argument("kind", choices=("mrs", "cm", "partition", "kas"))
    common(p)
    p.add_argument("-a", type=int, help="rows per rectangle (mrs)")
    p.add_argument("-b", type=int, help="columns per rectangle (mrs)")
    p.add_argument("-c", type=int, help="number of rectangles (mrs; default |G|/(a*b))")
    p.add_argument("-m", type=int, help="class size (partition/cm) or columns per array (kas)")
    p.add_argument("-j", "--rows", type=int, default=2, help="rows per array (kas)")
    p.set_defaults(run=_cmd_construct)

    p = sub.add_parser("verify", help="verify a certificate file")
    p.add_argument("path", help="JSON certificate file")
    p.set_defaults(run=_cmd_verify)

    p = sub.add_parser("catalog", help="build or re-verify a certificate catalog")
    common(p, group=False)
    p.add_argument("--max-order", type=int, default=16)
    p.add_argument("--kinds", help="comma-separated subset of " + ",".join(ALL_KINDS))
    p.add_argument("--load", action="store_true", help="re-verify an existing catalog")
    p.set_defaults(run=_cmd_catalog)
    p.epilog = f"catalog root: --out, else ${CATALOG_ROOT_ENV}, else ./zsmagic-catalog"

    p = sub.add_parser("selftest", help="run quick internal consistency checks")
    common(p, group=False)
    p.set_defaults(run=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.run(args)
    except VerificationError as exc:
        return _fail(str(exc), locus=exc.locus)
    except ZsmagicError as exc:
        return _fail(str(exc))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
