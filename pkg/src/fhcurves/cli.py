"""Command line entry point: ``fhcurves {build,verify,report,all}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .catalogue import CurveError
from .config import ConfigError, load_config, override
from .density import HorizonExhausted
from . import pipeline

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fhcurves", description=__doc__)
    p.add_argument("command", choices=["build", "verify", "report", "all"])
    p.add_argument("--config", help="key = value config file (default: packaged instance)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--ladder", help='radius ladder "r0:rmax:factor"')
    return p


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = load_config(args.config)
        out = str(Path(args.out).resolve()) if args.out else None
        cfg = override(cfg, out=out, seed=args.seed, ladder=args.ladder)
        status = EXIT_OK
        if args.command in ("build", "all"):
            path = pipeline.run_build(cfg)
            print(f"build artifacts in {path}")
        if args.command in ("verify", "all"):
            report = pipeline.run_verify(cfg)
            for suite, rec in report.failed():
                print(f"FAIL {suite}: {rec.name} ({rec.detail})", file=sys.stderr)
            n = len(report.records)
            print(f"verify: {n - len(report.failed())}/{n} checks passed; "
                  f"report in {cfg.out_dir() / pipeline.REPORT_FILE}")
            status = EXIT_OK if report.passed else EXIT_FAIL
        if args.command in ("report", "all"):
            for path in pipeline.run_report(cfg):
                print(f"wrote {path}")
        return status
    except (ConfigError, OSError, CurveError, HorizonExhausted, ValueError) as exc:
        print(f"fhcurves: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
