"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 invalid input,
3 the budget is too small for an exact answer.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .construct import expected_spectrum, realize
from .errors import BudgetError, InvalidInput
from .modact import act, elem_from_json, elem_to_json
from .poset import cn_realizable, poset_from_json
from .quiver import expr_from_json, expr_to_json, materialize, to_dot
from .series import format_series, mul, series_from_json, series_to_json, truncate
from .suite import Config, run_check
from .verify import divide_with_residual

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

log = logging.getLogger("atomspec")


def _load(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from None


def _dump(data) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


def _emit(args, name: str, text: str):
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text)
    else:
        sys.stdout.write(text)


def _config(args) -> Config:
    return Config(budget=args.budget, span_len=args.span_len, depth=args.depth,
                  seed=args.seed).validate()


def cmd_realize(args) -> int:
    P = poset_from_json(_load(args.poset))
    G = realize(P)
    spectrum = expected_spectrum(G)
    if args.out:
        _emit(args, "quiver.json", _dump(expr_to_json(G)))
        _emit(args, "spectrum.json", _dump({"spectrum": spectrum.to_json()}))
    else:
        _emit(args, "", _dump({"quiver": expr_to_json(G), "spectrum": spectrum.to_json()}))
    return EXIT_OK


def cmd_check(args) -> int:
    cfg = _config(args)
    P = poset_from_json(_load(args.poset))
    report = run_check(P, cfg)
    _emit(args, "report.json", _dump(report))
    return EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_cn_realizable(args) -> int:
    P = poset_from_json(_load(args.poset))
    _emit(args, "cn_realizable.json", _dump({"cn_realizable": cn_realizable(P)}))
    return EXIT_OK


def _series_out(args, name, f):
    if args.text:
        _emit(args, name.replace(".json", ".txt"), format_series(f) + "\n")
    else:
        _emit(args, name, _dump(series_to_json(f)))


def cmd_mul(args) -> int:
    f = series_from_json(_load(args.left))
    g = series_from_json(_load(args.right))
    h = mul(f, g)
    if args.order is not None:
        h = truncate(h, args.order)
    _series_out(args, "product.json", h)
    return EXIT_OK


def cmd_act(args) -> int:
    _config(args)
    expr = expr_from_json(_load(args.quiver))
    Q = materialize(expr, args.budget)
    y = elem_from_json(expr, _load(args.elem))
    f = series_from_json(_load(args.series))
    _emit(args, "action.json", _dump(elem_to_json(act(Q, y, f))))
    return EXIT_OK


def cmd_divide(args) -> int:
    _config(args)
    expr = expr_from_json(_load(args.quiver))
    Q = materialize(expr, args.budget)
    y = elem_from_json(expr, _load(args.y))
    z = elem_from_json(expr, _load(args.z))
    f, rest = divide_with_residual(Q, y, z, args.depth)
    if args.text:
        _emit(args, "quotient.txt", format_series(f) + "\n")
    else:
        _emit(args, "quotient.json", _dump({"quotient": series_to_json(f),
                                             "residual": elem_to_json(rest)}))
    return EXIT_OK


def cmd_dot(args) -> int:
    expr = expr_from_json(_load(args.quiver))
    _emit(args, "quiver.dot", to_dot(materialize(expr, args.budget)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=8, help="window size N (default 8)")
    common.add_argument("--span-len", type=int, default=6, help="span word length L (default 6)")
    common.add_argument("--depth", type=int, default=5, help="division depth D (default 5)")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--out", metavar="DIR", help="write output files into DIR")
    common.add_argument("--text", action="store_true",
                        help="print series in readable form instead of JSON")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="atomspec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("realize", parents=[common], help="quiver and expected spectrum of a poset")
    p.add_argument("poset")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("check", parents=[common], help="run the verification suite")
    p.add_argument("poset")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("cn-realizable", parents=[common],
                       help="is the poset the spectrum of a commutative noetherian ring")
    p.add_argument("poset")
    p.set_defaults(func=cmd_cn_realizable)

    p = sub.add_parser("mul", parents=[common], help="multiply two series")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--order", type=int, help="truncate the product at this word length")
    p.set_defaults(func=cmd_mul)

    p = sub.add_parser("act", parents=[common], help="act on a module element by a series")
    p.add_argument("quiver")
    p.add_argument("elem")
    p.add_argument("series")
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("divide", parents=[common], help="division algorithm on a tilde quiver")
    p.add_argument("quiver")
    p.add_argument("y")
    p.add_argument("z")
    p.set_defaults(func=cmd_divide)

    p = sub.add_parser("dot", parents=[common], help="DOT rendering of a quiver window")
    p.add_argument("quiver")
    p.set_defaults(func=cmd_dot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except BudgetError as exc:
        print(f"atomspec: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvalidInput as exc:
        print(f"atomspec: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
