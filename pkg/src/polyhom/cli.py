"""``polyhom <hulls|counterexample|homogenize|two-scale> --config <path>``.

Exit codes: 0 success, 2 configuration error, 3 numerical non-reproduction.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .config import ConfigError, RunConfig, load_config
from .reports import COMMANDS, CONFIG_ERROR


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"polyhom: error: {message}", file=sys.stderr)
        raise SystemExit(CONFIG_ERROR)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="polyhom", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="key = value configuration file")
    ap.add_argument("--out", help="output directory (overrides the config)")
    ap.add_argument("--variant", choices=["default", "convex-phase2"])
    ap.add_argument("--threads", type=int)
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        if args.out:
            cfg.out = args.out
        if args.variant:
            cfg.variant = args.variant
        if args.threads is not None:
            cfg.threads = args.threads
        cfg.validate()
    except ConfigError as exc:
        print(f"polyhom: config error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    try:
        report = COMMANDS[args.command](cfg)
    except ValueError as exc:  # inconsistent parameters surfacing from the operations
        print(f"polyhom: config error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    for path in report.write(cfg.out):
        print(path)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
