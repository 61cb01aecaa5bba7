"""Command line entry point: ``verify``, ``sample``, ``limit`` and ``converge``.

Exit status is 0 when every check passes, 1 on an invariant failure and 2
on a usage error.  Output goes to ``--out`` or stdout; a JSON result carries
its manifest inline, a CSV result gets a ``.manifest.json`` sidecar when
written to a file.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict
from pathlib import Path

from . import lab
from .gw import DEFAULT_CAP
from .pattern_oracle import PATTERNS, pattern_name

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

PATTERN_NAMES = [pattern_name(s) for s in PATTERNS]


class UsageError(Exception):
    pass


def _n_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma separated list of integers: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="permtrees", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, *, pattern_required: bool = True) -> None:
        p.add_argument("--pattern", choices=PATTERN_NAMES, required=pattern_required)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", type=Path)

    def monte_carlo(p: argparse.ArgumentParser) -> None:
        p.add_argument("--count", type=int, default=10_000)
        p.add_argument("--k", type=int, default=2)
        p.add_argument("--bucket-cap", type=int, default=50)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("verify", help="exhaustive bijection checks for small n")
    common(p, pattern_required=False)
    p.add_argument("--n", type=int, default=lab.MAX_VERIFY_N, help="largest n to check")

    p = sub.add_parser("sample", help="prefix law of the permutation of a uniform tree")
    common(p)
    monte_carlo(p)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("limit", help="prefix law of the limit object")
    common(p)
    monte_carlo(p)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="vertex cap per side tree")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("converge", help="TV distance to the limit law along a list of n")
    common(p)
    monte_carlo(p)
    p.add_argument("--n-list", type=_n_list, required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="vertex cap per side tree")
    p.add_argument("--workers", type=int, default=1)
    return parser


def _law_rows(law: lab.PrefixLaw) -> list[dict]:
    rows = []
    for key, n in sorted(law.counts.items()):
        row = {f"pi_{i}": ("LARGE" if c == lab.LARGE else c) for i, c in enumerate(key, start=1)}
        row["count"] = n
        rows.append(row)
    return rows


def _csv(rows: list[dict], fields: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _check_positive(**values: int) -> None:
    for name, v in values.items():
        if v < 1:
            raise UsageError(f"--{name.replace('_', '-')} must be positive")


def _run(args: argparse.Namespace) -> tuple[dict, list[dict] | None, list[str] | None, bool]:
    """Return (json payload, csv rows, csv fields, passed)."""
    if args.command == "verify":
        report = lab.verify(args.n)
        checks = [asdict(c) for c in report.checks if args.pattern in (None, c.sigma)]
        passed = all(c["passed"] for c in checks)
        payload = {"passed": passed, "n_max": args.n, "checks": checks}
        return payload, checks, ["name", "sigma", "n", "passed"], passed

    _check_positive(count=args.count, k=args.k, bucket_cap=args.bucket_cap)
    sigma = args.pattern
    if args.command == "sample":
        law = lab.sample_laws([sigma], args.n, args.count, args.k, args.bucket_cap, args.seed)[tuple(map(int, sigma))]
    elif args.command == "limit":
        law = lab.limit_laws([sigma], args.count, args.k, args.bucket_cap, args.seed, args.cap, args.workers)[
            tuple(map(int, sigma))
        ]
    else:
        rows = [
            asdict(r)
            for r in lab.converge(
                sigma, args.n_list, args.count, args.k, args.bucket_cap, args.seed, args.cap, workers=args.workers
            )
        ]
        return {"rows": rows}, rows, ["n", "tv", "tv_stderr", "samples", "errors"], True

    passed = sum(law.counts.values()) == law.total
    fields = [f"pi_{i}" for i in range(1, args.k + 1)] + ["count"]
    return {"law": law.to_dict()}, _law_rows(law), fields, passed


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad flags
    flags = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items() if k != "command"}
    try:
        payload, rows, fields, passed = _run(args)
    except (UsageError, ValueError) as exc:
        print(f"permtrees {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    meta = lab.manifest(args.command, flags)
    if args.format == "json":
        text = lab.dumps({"manifest": meta, **payload}) + "\n"
    else:
        text = _csv(rows or [], fields or [])
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text)
        if args.format == "csv":
            args.out.with_name(args.out.name + ".manifest.json").write_text(lab.dumps(meta) + "\n")
    if not passed:
        print(f"permtrees {args.command}: invariant failure", file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
