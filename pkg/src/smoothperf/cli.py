"""Command line entry point: ``smoothperf {train,compare,eval}``.

Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import harness, objectives
from .data import DataFormatError, load_svmlight
from .smoothing import Loss

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _float_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def _str_list(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _common(p):
    p.add_argument("--loss", required=True, choices=[l.value for l in Loss])
    p.add_argument("--train", required=True, metavar="PATH")
    p.add_argument("--test", metavar="PATH")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--epsilon", type=float, default=harness.DEFAULT_EPSILON)
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--lbfgs-buffer", type=int, default=6)


def build_parser():
    parser = _Parser(prog="smoothperf", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("train", help="train one configuration")
    _common(t)
    t.add_argument("--solver", required=True, choices=harness.SOLVERS)
    t.add_argument("--mu-mult", type=float, default=1.0)
    t.add_argument("--trace", metavar="PATH")
    t.add_argument("--model", metavar="PATH")

    c = sub.add_parser("compare", help="run several solvers / mu multipliers")
    _common(c)
    c.add_argument("--solvers", type=_str_list, required=True)
    c.add_argument("--mu-mults", type=_float_list,
                   default=list(harness.DEFAULT_MU_MULTS))
    c.add_argument("--out-dir", default=".", metavar="DIR")

    e = sub.add_parser("eval", help="evaluate a saved model")
    e.add_argument("--model", required=True, metavar="PATH")
    e.add_argument("--test", required=True, metavar="PATH")
    e.add_argument("--loss", required=True, choices=[l.value for l in Loss])
    return parser


def _load_pair(args):
    train = load_svmlight(args.train)
    test = load_svmlight(args.test, n_features=train.p) if args.test else None
    return train, test


def cmd_train(args):
    if args.solver == "bundle" and args.mu_mult != 1.0:
        logging.getLogger("smoothperf").warning("--mu-mult is ignored by the bundle solver")
    train, test = _load_pair(args)
    res = harness.run(train, args.loss, args.solver, args.lam, args.epsilon, args.mu_mult,
                      args.max_iter, args.tol, args.lbfgs_buffer, test)
    if args.trace:
        harness.write_trace(args.trace, res.trace)
    else:
        sys.stdout.write(harness.format_trace(res.trace))
    if args.model:
        harness.save_model(args.model, res.w)
    last = res.trace[-1]
    print(f"status={res.status} iterations={last.iter} primal_J={last.primal_J:.10g}",
          file=sys.stderr)


def cmd_compare(args):
    unknown = [s for s in args.solvers if s not in harness.SOLVERS]
    if not args.solvers or unknown:
        raise UsageError(f"--solvers must be a non-empty subset of {','.join(harness.SOLVERS)}")
    train, test = _load_pair(args)
    runs, summary = harness.compare(train, args.loss, args.solvers, args.mu_mults, args.lam,
                                    args.epsilon, args.max_iter, args.tol,
                                    args.lbfgs_buffer, test)
    os.makedirs(args.out_dir, exist_ok=True)
    for r in runs:
        fname = r.name.replace("@mu*", "_mu") + ".csv"
        harness.write_trace(os.path.join(args.out_dir, f"trace_{fname}"), r.trace)
    text = harness.format_summary(summary)
    with open(os.path.join(args.out_dir, "summary.csv"), "w") as f:
        f.write(text)
    sys.stdout.write(text)


def cmd_eval(args):
    w = harness.load_model(args.model)
    test = load_svmlight(args.test, n_features=w.size)
    metric = harness.evaluate_metric(args.loss, w, test)
    risk = objectives.exact_risk(args.loss, test)(w).value
    print(f"{args.loss}_metric={metric:.17g}")
    print(f"exact_risk={risk:.17g}")


COMMANDS = {"train": cmd_train, "compare": cmd_compare, "eval": cmd_eval}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"smoothperf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, DataFormatError, FloatingPointError) as exc:
        print(f"smoothperf: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
