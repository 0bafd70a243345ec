"""Command line front end.

Every invocation prints one JSON record per line::

    {"ok": true, "command": "value", "result": {...}}
    {"ok": false, "error": {"kind": "PrecisionExhausted", "detail": "...", ...}}

Exit codes: 0 success, 2 usage/parse error, 3 PrecisionExhausted,
4 iteration budget exceeded, 5 internal defect.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .descent import descend
from .errors import DiscvalError, PrecisionExhausted, UsageError
from .expr import parse_map, parse_polynomial
from .valuation import (Phi, PhiSpec, build_phi, custom_phi, default_primes,
                        probe_injectivity, residue, value_with_escalation)
from .witnesses import generators_are_standard, make_witness, residue_generators

COMMANDS = ("value", "residue", "witness", "generators", "descend",
            "probe-injectivity", "demo-dimension")


@dataclass
class RunConfig:
    n: Optional[int] = None
    m: Optional[int] = None
    primes: Optional[List[int]] = None
    precision: int = 8
    seed: int = 0
    max_iterations: int = 16
    map_text: Optional[str] = None
    attempts: int = 1
    expr: Optional[str] = None
    num: Optional[str] = None
    den: Optional[str] = None
    degree: int = 3
    trials: int = 100

    def phi(self) -> Phi:
        if self.precision < 1:
            raise UsageError("--prec must be >= 1")
        if self.map_text:
            n, m, builder = parse_map(self.map_text, self.m)
            if self.n is not None and self.n != n:
                raise UsageError(f"--n {self.n} does not match the map (n = {n})")
            return custom_phi(builder, n, m, self.precision, label=self.map_text)
        n = 3 if self.n is None else self.n
        m = 1 if self.m is None else self.m
        primes = self.primes
        if primes is None:
            primes = list(default_primes(max(n - m - 1, 0)))
        return build_phi(PhiSpec(n, m, tuple(primes), self.precision))


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required for this command")
    return value


def run(command: str, config: RunConfig) -> dict:
    """Execute ``command`` and return its result record (raises DiscvalError)."""
    phi = config.phi()
    n = phi.n
    if command == "value":
        f = parse_polynomial(_need(config.expr, "--expr"), n)
        res = value_with_escalation(f, phi, config.attempts)
        if res.exhausted:
            raise PrecisionExhausted(f"no finite value for {f}", horizons=res.horizons)
        return res.to_record()
    if command in ("residue", "witness", "demo-dimension"):
        f = parse_polynomial(_need(config.num, "--num"), n)
        g = parse_polynomial(_need(config.den, "--den"), n)
        if command == "residue":
            return residue(f, g, phi).to_record()
        w = make_witness(f, g, phi)
        if command == "witness":
            return w.to_record()
        gens = residue_generators(phi)
        return {
            "n": n,
            "m": phi.m,
            **gens.to_record(),
            "generators_standard": generators_are_standard(gens, phi.m),
            "witness": w.to_record(),
            "dimension_evidence": (f"{phi.m} independent generator residues; "
                                   f"residue of f/g algebraic over them"),
        }
    if command == "generators":
        gens = residue_generators(phi)
        return {**gens.to_record(), "standard": generators_are_standard(gens, phi.m)}
    if command == "descend":
        cert = descend(phi, config.max_iterations)
        return cert.to_record()
    if command == "probe-injectivity":
        report = probe_injectivity(phi, config.degree, config.trials, config.seed,
                                   attempts=config.attempts)
        return report.to_record()
    raise UsageError(f"unknown command {command!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _primes(text: str) -> List[int]:
    try:
        return [int(p) for p in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"bad prime list {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="discval", description="Discrete valuations of k((X1..Xn)) by substitution maps.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--n", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--primes", action="extend", nargs="+", type=_primes,
                       help="odd primes for X_{m+2}..X_n, e.g. '3,5' or '3 5'")
        p.add_argument("--prec", type=int, default=8, dest="precision")
        p.add_argument("--map", dest="map_text",
                       help="custom map, e.g. 'X1 -> t; X2 -> u*t; X3 -> puiseux(3)'")
        p.add_argument("--seed", type=int, default=0)
        if name == "value":
            p.add_argument("--expr", required=True)
            p.add_argument("--attempts", type=int, default=1,
                           help="number of precision horizons T, 2T, 4T, ... to try")
        if name in ("residue", "witness", "demo-dimension"):
            p.add_argument("--num", required=True)
            p.add_argument("--den", required=True)
        if name == "descend":
            p.add_argument("--max-iterations", type=int, default=16, dest="max_iterations")
        if name == "probe-injectivity":
            p.add_argument("--degree", type=int, default=3)
            p.add_argument("--trials", type=int, default=500)
            p.add_argument("--attempts", type=int, default=3)
    return parser


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig()
    for key, val in vars(args).items():
        if key == "command" or val is None:
            continue
        if key == "primes":
            val = [p for group in val for p in group]
        setattr(cfg, key, val)
    return cfg


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    command = None
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        if command is None:
            raise UsageError(f"a command is required: {', '.join(COMMANDS)}")
        result = run(command, _config_from_args(args))
        print(json.dumps({"ok": True, "command": command, "result": result}, ensure_ascii=False),
              file=out)
        return 0
    except DiscvalError as e:
        print(json.dumps({"ok": False, "error": e.to_record()},
                         ensure_ascii=False, default=str), file=out)
        return e.exit_code
    except Exception as e:  # noqa: BLE001 - CLI boundary, report bugs as records
        print(json.dumps({"ok": False, "error": {"kind": "InternalError",
                                                 "detail": f"{type(e).__name__}: {e}"}}), file=out)
        return 5


if __name__ == "__main__":
    sys.exit(main())
