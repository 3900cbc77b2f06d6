"""Command-line interface: ``k4e construct | verify | nonexist | leaves | catalog``.

Exit codes: 0 ok, 1 verification failed (or, for ``nonexist``, a design
exists), 2 known nonexistence, 3 bad input, 4 unsupported, 5 budget
exceeded. JSON on stdout is the machine interface; ``--format text``
prints blocks as ``[a, b, c - d]``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import catalog
from .errors import (
    BudgetExceeded,
    InvalidBlock,
    K4eError,
    KnownException,
    Timeout,
    UnclassifiableLeave,
    UnknownId,
    Unsupported,
)
from .ingredients import cache
from .model import SHORT_PAIRS, Design, LeaveClass, admissible_leaves, classify_leave, min_leave_size, sort_classes
from .verify import Report, ViolationKind, verify_family

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_KNOWN = 2
EXIT_INPUT = 3
EXIT_UNSUPPORTED = 4
EXIT_BUDGET = 5

FAMILIES = ("mgdp", "gdd", "igdd1", "igdd2", "hgdd")


class InputError(Exception):
    """Bad flags or a malformed input file (exit 3)."""


# ---------------------------------------------------------------------------
# output helpers


def _leave_json(cls: LeaveClass | None) -> dict | None:
    return None if cls is None else {"tag": cls.tag, "paper_name": cls.paper_name}


def _safe_class(d: Design) -> LeaveClass | None:
    try:
        return classify_leave(d.leave)
    except UnclassifiableLeave:
        return None


def design_text(d: Design, cls: LeaveClass | None = None, title: str = "") -> str:
    lines = []
    if title:
        lines.append(title)
    lines.append(f"type {d.descriptor}, {d.n_points} points, {len(d.blocks)} blocks")
    lines.append("groups: " + "  ".join("{" + ", ".join(map(str, G)) + "}" for G in d.groups))
    if d.holes.kind != "none":
        sets = "  ".join("{" + ", ".join(map(str, sorted(S))) + "}" for S in d.holes.sets)
        lines.append(f"holes ({d.holes.kind}): {sets}")
    lines.append("blocks:")
    lines.extend(f"  {b}" for b in d.blocks)
    leave = ", ".join(f"{u}-{v}" for u, v in sorted(d.leave)) or "none"
    tag = f" [{cls.tag}]" if cls is not None else ""
    lines.append(f"leave{tag}: {leave}")
    return "\n".join(lines)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _parse_leave(tag: str) -> LeaveClass:
    try:
        return LeaveClass.parse(tag)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _check_gn(g: int, n: int) -> None:
    if g < 1 or n < 3:
        raise InputError(f"need g >= 1 and n >= 3, got g={g}, n={n}")


# ---------------------------------------------------------------------------
# commands


def cmd_construct(args) -> int:
    from .planner import construct_mgdp

    _check_gn(args.g, args.n)
    cls = _parse_leave(args.leave)
    try:
        built = construct_mgdp(args.g, args.n, cls)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    d = built.design
    if args.format == "json":
        data = d.to_dict(cls)
        if args.trace:
            data["trace"] = built.trace.to_dict()
        _emit(json.dumps(data, indent=2), args.out)
    else:
        text = design_text(d, cls, f"MGDP {d.descriptor} with leave {cls.tag} ({cls.paper_name})")
        if args.trace:
            text += "\ntrace:\n" + built.trace.render(1)
        _emit(text, args.out)
    return EXIT_OK


def _load_design(path: str) -> Design:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return Design.from_json(text)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except (ValueError, KeyError, TypeError, InvalidBlock) as exc:
        raise InputError(f"malformed design file {path}: {exc}") from None


def verify_design(d: Design, family: str, expected: LeaveClass | None) -> Report:
    """Family check; an MGDP without ``--expect-leave`` must still have a named leave class."""
    rep = verify_family(d, family, expected)
    if rep.ok and family == "mgdp" and expected is None:
        g, n = d.uniform()
        if (g, n) not in SHORT_PAIRS:
            try:
                classify_leave(d.leave)
            except UnclassifiableLeave as exc:
                rep.add(ViolationKind.WrongLeaveClass, str(exc))
    return rep


def cmd_verify(args) -> int:
    expected = _parse_leave(args.expect_leave) if args.expect_leave else None
    d = _load_design(args.file)
    rep = verify_design(d, args.family, expected)
    if args.format == "json":
        data = {
            "ok": rep.ok,
            "family": args.family,
            "type": d.descriptor,
            "blocks": len(d.blocks),
            "leave_class": _leave_json(_safe_class(d)),
            "violations": [{"kind": v.kind.value, "detail": v.detail} for v in rep.violations],
        }
        print(json.dumps(data, indent=2))
    else:
        if rep.ok:
            cls = _safe_class(d)
            tag = f", leave {cls.tag}" if cls is not None else ""
            print(f"ok: {args.family} {d.descriptor}, {len(d.blocks)} blocks{tag}")
        else:
            print(f"FAILED: {rep.count} violation(s)")
            for v in rep.violations:
                print(f"  {v}")
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_nonexist(args) -> int:
    from .search import prove_nonexistence

    _check_gn(args.g, args.n)
    cls = _parse_leave(args.leave)
    try:
        cert = prove_nonexistence(args.g, args.n, cls, node_budget=args.budget, time_budget=args.time_budget, jobs=args.jobs)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    data = cert.to_dict()
    if cert.witness is not None:
        data["witness"] = cert.witness.to_dict(cls)
    if args.format == "json":
        _emit(json.dumps(data, indent=2), args.out)
    else:
        lines = [f"{cert.g}^{cert.n} with leave {cls.tag}, {cert.count} blocks: {cert.conclusion}"]
        for o in cert.orbits:
            where = ", ".join(f"{u}-{v}" for u, v in o.placement)
            lines.append(f"  placement {where}: {o.result} ({o.nodes} nodes)")
        lines.append(f"total nodes: {cert.nodes}")
        if cert.witness is not None:
            lines.append(design_text(cert.witness, cls, "witness:"))
        _emit("\n".join(lines), args.out)
    return EXIT_OK if cert.conclusion == "nonexistent" else EXIT_VERIFY


def cmd_leaves(args) -> int:
    _check_gn(args.g, args.n)
    classes = sort_classes(admissible_leaves(args.g, args.n))
    if args.format == "json":
        data = {
            "type": f"{args.g}^{args.n}",
            "min_leave_size": min_leave_size(args.g, args.n),
            "short": (args.g, args.n) in SHORT_PAIRS,
            "leaves": [_leave_json(c) for c in classes],
        }
        print(json.dumps(data, indent=2))
    else:
        print(",".join(c.tag for c in classes) if classes else "none")
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.action == "list":
        rows = catalog.list_entries()
        if args.format == "json":
            print(json.dumps([{"id": i, "label": label} for i, label in rows], indent=2))
        else:
            width = max(len(i) for i, _ in rows)
            for i, label in rows:
                print(f"{i:<{width}}  {label}")
        return EXIT_OK
    if not args.id:
        raise InputError("catalog dump needs an entry id")
    try:
        e = catalog.entry(args.id)
        d = catalog.get(args.id)
    except (UnknownId, KeyError):
        raise InputError(f"unknown catalog id {args.id!r}") from None
    if args.format == "json":
        data = d.to_dict(e.leave)
        data["family"] = e.family
        _emit(json.dumps(data, indent=2), args.out)
    else:
        _emit(design_text(d, e.leave, f"{e.id}: {e.label}"), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    from .search import DEFAULT_NODE_BUDGET, DEFAULT_TIME_BUDGET

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--no-cache", action="store_true", help="ignore and do not write the ingredient cache")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="k4e", description="Maximum group divisible (K4-e)-packings.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common], help="build a maximum packing with a given leave")
    c.add_argument("--g", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--leave", required=True, help="leave tag such as E2_1 or E0")
    c.add_argument("--out", help="write to FILE instead of stdout")
    c.add_argument("--trace", action="store_true", help="include the construction trace")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", parents=[common], help="verify a design JSON file ('-' for stdin)")
    v.add_argument("file")
    v.add_argument("--family", choices=FAMILIES, default="mgdp")
    v.add_argument("--expect-leave", help="required leave class")
    v.set_defaults(func=cmd_verify)

    x = sub.add_parser("nonexist", parents=[common], help="exhaustive search for a nonexistence certificate")
    x.add_argument("--g", type=int, required=True)
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--leave", required=True)
    x.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET, help="node budget per leave placement")
    x.add_argument("--time-budget", type=float, default=DEFAULT_TIME_BUDGET, help="seconds per leave placement")
    x.add_argument("--jobs", type=int, default=1, help="parallel placement searches")
    x.add_argument("--out", help="write the certificate to FILE")
    x.set_defaults(func=cmd_nonexist)

    le = sub.add_parser("leaves", parents=[common], help="admissible minimum leave classes of g^n")
    le.add_argument("--g", type=int, required=True)
    le.add_argument("--n", type=int, required=True)
    le.set_defaults(func=cmd_leaves)

    k = sub.add_parser("catalog", parents=[common], help="list or dump transcribed designs")
    k.add_argument("action", choices=("list", "dump"))
    k.add_argument("id", nargs="?")
    k.add_argument("--out", help="write the dump to FILE")
    k.set_defaults(func=cmd_catalog)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; bad input is exit 3 here
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if args.no_cache:
        cache.set_enabled(False)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except KnownException as exc:
        print(f"nonexistent: {exc}", file=sys.stderr)
        return EXIT_KNOWN
    except Unsupported as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (BudgetExceeded, Timeout) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except K4eError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    finally:
        if args.no_cache:
            cache.set_enabled(True)


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_exit()
