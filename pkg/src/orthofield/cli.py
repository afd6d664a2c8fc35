"""Command line front end.

One subcommand per experiment; the experiment payload comes from a JSON
config file, with --seed and --threads as overrides.  Exit codes: 0 when
every verdict is PASS (or the experiment is purely informational), 2
when a verdict is FAIL, 1 for anything that prevented a verdict
(malformed config, missing file, invalid arguments, numeric failure).
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import OrthofieldError
from .harness import EXPERIMENTS, config_from_dict, run_experiment


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors, which this CLI
    reserves for FAIL verdicts; remap usage problems to status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="orthofield", description=__doc__)
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help="run the %s experiment" % name)
        p.add_argument("--config", help="JSON experiment config", default=None)
        p.add_argument("--out", help="write the report here (default stdout)", default=None)
        p.add_argument("--threads", type=int, default=None, help="worker threads")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    data = {}
    if args.config is not None:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print("config error: %s" % exc, file=sys.stderr)
            return 1
    if data.get("experiment", args.experiment) != args.experiment:
        print("config is for experiment %r, not %r" % (data["experiment"], args.experiment),
              file=sys.stderr)
        return 1
    data["experiment"] = args.experiment
    if args.seed is not None:
        data["seed"] = args.seed
    if args.threads is not None:
        data["threads"] = args.threads

    try:
        report = run_experiment(config_from_dict(data))
    except OrthofieldError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1

    text = report.to_json()
    if args.out is not None:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            print("output error: %s" % exc, file=sys.stderr)
            return 1
    else:
        print(text)
    print("verdict: %s (%.2fs)" % (report.verdict, report.wall_clock_s), file=sys.stderr)
    return 0 if report.verdict in ("PASS", "INFO") else 2


if __name__ == "__main__":
    sys.exit(main())
