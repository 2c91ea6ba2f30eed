"""Command line front end.

::

    aggcoda analyze --method t-tlra,a-tlra,a-approx --x X.csv --z Z.csv \\
        --blocks 2,3,3,3 --axes 4 --mode auto --out DIR [--plots]
    aggcoda analyze --method t-tlra --t T.csv --out DIR
    aggcoda synth --seed 1 --rows 166 --cols 9 --blocks 2,3,3,3 --effect 0.5 --out DIR

Exit codes: 0 success, 2 input error, 3 numerical failure, 4 configuration
error.  Failures print one ``category: message`` line on stderr.
"""

from __future__ import annotations

import argparse
import sys

from .errors import AggCodaError, ConfigError, NumericalError
from .pipeline import METHODS, AnalysisConfig, run_analysis
from .synth import write_synthetic
from .tables import parse_blocks
from .tsvd import DEFAULT_SEED

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_CONFIG = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(f"config: {message}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="aggcoda", description="Log interaction analysis of aggregate compositional data.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="run one or more methods and write reports")
    a.add_argument("--method", default=",".join(METHODS),
                   help="comma-separated subset of " + ", ".join(METHODS))
    a.add_argument("--x", help="elementary table X (CSV)")
    a.add_argument("--z", help="indicator matrix Z (CSV)")
    a.add_argument("--blocks", help="covariate block sizes of Z, e.g. 2,3,3,3")
    a.add_argument("--t", help="aggregate table T (CSV) instead of X and Z")
    a.add_argument("--axes", type=int, default=4)
    a.add_argument("--mode", choices=("auto", "exhaustive", "ascent"), default="auto")
    a.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for ascent restarts")
    a.add_argument("--col-weights", default="uniform",
                   help="uniform, marginal, or a CSV of column weights")
    a.add_argument("--pseudocount", type=float, default=None,
                   help="add to every cell before taking logs (off by default)")
    a.add_argument("--plots", action="store_true", help="write SVG principal maps")
    a.add_argument("--out", required=True)

    s = sub.add_parser("synth", help="write a synthetic paired data set")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--rows", type=int, default=166)
    s.add_argument("--cols", type=int, default=9)
    s.add_argument("--blocks", default="2,3,3,3")
    s.add_argument("--effect", type=float, default=0.5)
    s.add_argument("--noise", type=float, default=0.25)
    s.add_argument("--out", required=True)
    return p


def _analyze(args) -> None:
    config = AnalysisConfig(
        methods=tuple(m.strip() for m in args.method.split(",") if m.strip()),
        n_axes=args.axes, mode=args.mode, seed=args.seed, out_dir=args.out,
        plots=args.plots, col_weights=args.col_weights, pseudocount=args.pseudocount,
    )
    result = run_analysis(config, args.x, args.z, args.blocks, args.t)
    sys.stdout.write(result.table.to_text())


def _synth(args) -> None:
    if args.rows < 2 or args.cols < 2:
        raise ConfigError("--rows and --cols must be at least 2")
    xp, zp = write_synthetic(args.out, args.seed, args.rows, args.cols, parse_blocks(args.blocks),
                             args.effect, args.noise)
    print(xp)
    print(zp)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            _analyze(args)
        else:
            _synth(args)
    except ConfigError as exc:
        print(f"config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except AggCodaError as exc:
        print(f"{exc.category}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
