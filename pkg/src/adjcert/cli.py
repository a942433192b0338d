"""Command-line entry point."""
from __future__ import annotations

import argparse
import sys

from .brauer import h3_symbol_is_nonzero
from .errors import ConfigError, UnsupportedPrime, VerificationError
from .funfield import parse_monomial_class
from .harness import Scenario, run_scenario
from .padic import DEFAULT_PRECISION, check_odd_prime
from .quadform import LocalField
from .funfield import FieldTag


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="adjcert", description="Verify R-equivalence obstructions for adjoint classical groups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run a verification scenario and print its certificate")
    v.add_argument("--scenario", choices=["prelim", "a1", "a2", "dd"], required=True)
    v.add_argument("--p", type=int, required=True)
    v.add_argument("--m", type=int, default=1)
    v.add_argument("--unit", type=int, default=None, help="nonsquare unit b (default: smallest nonresidue)")
    v.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    v.add_argument("--format", choices=["text", "json"], default="text")
    v.add_argument("--out", default=None, help="also write the report to this path")

    h = sub.add_parser("hilbert", help="Hilbert symbol of two monomials over Q_p")
    h.add_argument("--p", type=int, required=True)
    h.add_argument("a")
    h.add_argument("b")

    s = sub.add_parser("symbol3", help="decide (a)u(b)u(c) != 0 over Q_p(t)")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("c")
    return parser


def _verify(args) -> int:
    sc = Scenario(args.scenario, args.p, args.m, args.unit, args.precision)
    cert = run_scenario(sc)
    report = cert.to_json() if args.format == "json" else cert.to_text()
    print(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report + "\n")
    return 0 if cert.verdict else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "verify":
            return _verify(args)
        p = check_odd_prime(args.p)
        if args.command == "hilbert":
            k = LocalField.of(FieldTag.qp(p))
            value = k.hilbert(parse_monomial_class(args.a, p), parse_monomial_class(args.b, p))
            print("+1" if value == 1 else "-1")
            return 0
        a, b, c = (parse_monomial_class(x, p) for x in (args.a, args.b, args.c))
        print("nonzero" if h3_symbol_is_nonzero(a, b, c).nonzero else "zero")
        return 0
    except (ConfigError, UnsupportedPrime, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"verification error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
