"""Command line front end: ``gersten-lab verify | classify | k0 | replay``.

Exit status is 0 when everything passes, 1 when a check fails or the input
is rejected by the mathematics (NotInC, UnitElement, ...), 2 on usage,
configuration or parse errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from gersten_lab import category, k0, serialize, suites
from gersten_lab.errors import (
    ConfigInvalid,
    GerstenLabError,
    ParseError,
    UnknownRingKind,
)
from gersten_lab.matrix import Matrix
from gersten_lab.rings import make_ring

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _default_seed() -> int:
    raw = os.environ.get("GERSTEN_LAB_SEED")
    if raw is None:
        return 42
    try:
        return int(raw)
    except ValueError as e:
        raise ConfigInvalid(f"GERSTEN_LAB_SEED is not an integer: {raw!r}") from e


def _split(values) -> tuple[str, ...]:
    return tuple(sorted({v.strip() for item in values or () for v in item.split(",") if v.strip()}))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gersten-lab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run the randomized verification suites")
    v.add_argument("--ring", default="Z@5", help='"Z@<prime>" or "Q[t]@t" (default Z@5)')
    v.add_argument("--seed", type=int, default=None, help="random seed (default $GERSTEN_LAB_SEED or 42)")
    v.add_argument("--count", type=int, default=200, help="instances per check before cost scaling")
    v.add_argument("--max-dim", type=int, default=4)
    v.add_argument("--max-val", type=int, default=3)
    v.add_argument("--format", choices=("json", "markdown"), default="json")
    v.add_argument("--level", type=int, default=3, help="truncation level of the simplicial check")
    v.add_argument("--sabotage", action="append", metavar="FLAG",
                   help="break one operation on purpose: " + ", ".join(sorted(suites.SABOTAGE)))
    v.add_argument("--only", action="append", metavar="ANCHOR", help="run only these checks")
    v.add_argument("--timings", action="store_true", help="include wall times (makes output non-reproducible)")
    v.add_argument("--list", action="store_true", help="list the checks and exit")
    v.add_argument("-o", "--output", help="write the report here instead of stdout")

    c = sub.add_parser("classify", help="classify a two-term complex given as JSON")
    c.add_argument("file", help='JSON {"ring"?, "ranks", "d"}; "-" reads stdin')
    c.add_argument("--ring", default=None, help="ring when the file does not name one")

    k = sub.add_parser("k0", help="telescope witness and K_0 class of R/(f)")
    k.add_argument("f", help="non-zero non-unit element, e.g. 25 or t^2+t^3")
    k.add_argument("--ring", default="Z@5")

    r = sub.add_parser("replay", help="re-run the counterexamples recorded in a verify report")
    r.add_argument("report", help="JSON report written by verify")
    return p


def _emit(text: str, path: str | None = None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error_json(e: Exception) -> str:
    return serialize.dumps({"error": type(e).__name__, "message": str(e)})


def cmd_verify(args) -> int:
    if args.list:
        for chk in sorted(suites.CHECKS, key=lambda c: c.anchor):
            print(f"{chk.anchor}\t{chk.module}\tcost {chk.cost}")
        return EXIT_OK
    config = suites.SuiteConfig(
        ring=args.ring,
        seed=args.seed if args.seed is not None else _default_seed(),
        count=args.count,
        max_dim=args.max_dim,
        max_val=args.max_val,
        format=args.format,
        level=args.level,
        sabotage=_split(args.sabotage),
        only=_split(args.only),
        timings=args.timings,
    )
    report = suites.run_suites(config)
    text = serialize.dumps(report) if config.format == "json" else suites.to_markdown(report)
    _emit(text, args.output)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from e


def cmd_classify(args) -> int:
    data = serialize.loads(_read(args.file))
    ring = make_ring(args.ring) if args.ring else None
    x = serialize.complex_from_json(data, ring)
    try:
        c = category.classify(x)
    except GerstenLabError as e:
        _emit(_error_json(e))
        return EXIT_FAIL
    w = c.witness(x)
    identity = w.comp(1).rows == w.comp(1).cols and all(
        w.comp(k) == Matrix.identity(x.ring, x.rank(k)) for k in (1, 0)
    )
    _emit(serialize.dumps({
        "ring": x.ring.spec,
        "n": c.obj.n,
        "m": c.obj.m,
        "exponents": list(c.exponents),
        "witness": {
            "identity": identity,
            "degree_1": serialize.matrix_to_json(c.w1),
            "degree_0": serialize.matrix_to_json(c.w0),
            "verified": c.verify(x),
        },
    }))
    return EXIT_OK


def cmd_k0(args) -> int:
    ring = make_ring(args.ring)
    f = ring.parse(args.f)
    try:
        w = k0.telescope_witness(ring, f)
    except GerstenLabError as e:
        _emit(_error_json(e))
        return EXIT_FAIL
    _emit(serialize.dumps({
        "ring": ring.spec,
        "f": ring.format(f),
        "class": k0.k0_class(w.C),
        "classes": {"A": k0.k0_class(w.A), "B": k0.k0_class(w.B), "C": k0.k0_class(w.C)},
        "additive": w.k0_additive(),
        "ses": serialize.ses_to_json(w),
    }))
    return EXIT_OK


def cmd_replay(args) -> int:
    report = serialize.loads(_read(args.report))
    cfg = report.get("config", {})
    config = suites.SuiteConfig(
        ring=cfg.get("ring", "Z@5"), seed=cfg.get("seed", 42), count=cfg.get("count", 1),
        max_dim=cfg.get("max_dim", 4), max_val=cfg.get("max_val", 3), level=cfg.get("level", 3),
        sabotage=tuple(cfg.get("sabotage", ())),
    ).validate()
    out = []
    for entry in report.get("checks", []):
        cx = entry.get("counterexample")
        if not cx:
            continue
        reason = suites.replay(entry["anchor"], cx, config)
        out.append({"anchor": entry["anchor"], "instance": cx["instance"], "reproduced": reason is not None,
                    "reason": reason})
    _emit(serialize.dumps({"replayed": out}))
    return EXIT_FAIL if any(r["reproduced"] for r in out) else EXIT_OK


COMMANDS = {"verify": cmd_verify, "classify": cmd_classify, "k0": cmd_k0, "replay": cmd_replay}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigInvalid, ParseError, UnknownRingKind) as e:
        print(f"gersten-lab: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except GerstenLabError as e:
        print(f"gersten-lab: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
