"""``polyent`` command-line interface.

Exit codes: 0 for a decided result, 2 when the answer is UNKNOWN within the
budget, 1 for errors (including usage errors and failed verification).
Analysis commands print a JSON run report; ``family``, ``double`` and
``horseshoe`` write bare map or certificate files so their output can be
fed straight back in.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import __version__
from .classify import UNKNOWN, polynomial_entropy
from .errors import DomainError, InsufficientData, PolyentError
from .families import FamilySpec, doubled, make
from .fixstruct import structure_report
from .horseshoe import (
    HorseshoeCertificate,
    horseshoe_for_map,
    horseshoe_from_simple_cycle,
    verify_horseshoe,
)
from .logistic import logistic_map, parse_sweep, sweep
from .plmap import load_map
from .seporacle import OracleConfig, slope_estimate
from .symbolic import complexity, dendrite_hpol_bracket, dendrite_sep_lower, load_sequence, subshift_hpol_estimate

EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for UNKNOWN here
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


class Output:
    def __init__(self, args, argv: List[str]):
        self.args = args
        self.argv = argv
        self.inputs = {}

    def note_input(self, path):
        self.inputs[str(path)] = _digest(path)

    def _emit(self, text: str):
        if self.args.out:
            Path(self.args.out).write_text(text)
        else:
            sys.stdout.write(text)

    def artifact(self, data: dict):
        self._emit(json.dumps(data, indent=2) + "\n")

    def report(self, result: dict, rows=None, header=None):
        if self.args.format == "csv":
            if rows is None:
                raise UsageError(f"{self.args.command} has no tabular output; use --format json")
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
            self._emit(buf.getvalue())
            return
        doc = {
            "command": self.argv,
            "inputs": self.inputs,
            "result": result,
            "seed": self.args.seed,
            "version": __version__,
        }
        self._emit(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _load(out: Output, path):
    out.note_input(path)
    return load_map(path)


def cmd_hpol(args, out):
    f = _load(out, args.map)
    report = polynomial_entropy(f, args.budget)
    out.report(report.to_json())
    return EXIT_UNKNOWN if report.h_pol == UNKNOWN else EXIT_OK


def cmd_structure(args, out):
    f = _load(out, args.map)
    out.report(structure_report(f))
    return EXIT_OK


def cmd_horseshoe(args, out):
    f = _load(out, args.map)
    if args.simple_cycle is not None:
        cert = horseshoe_from_simple_cycle(f, args.simple_cycle)
    else:
        cert = horseshoe_for_map(f, args.budget)
    if cert is None:
        print("map has zero polynomial entropy: no one-way horseshoe exists", file=sys.stderr)
        out.artifact({"certificate": None})
        return EXIT_OK
    out.artifact(cert.to_json())
    return EXIT_OK


def cmd_verify(args, out):
    f = _load(out, args.map)
    out.note_input(args.cert)
    try:
        data = json.loads(Path(args.cert).read_text())
    except json.JSONDecodeError as exc:
        raise DomainError(f"{args.cert}: invalid JSON ({exc})") from exc
    result = verify_horseshoe(f, HorseshoeCertificate.from_json(data))
    out.report(result.to_json())
    if not result:
        print(f"verification failed: {result.failure}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def cmd_family(args, out):
    spec = FamilySpec(args.kind, n=args.n)
    f = doubled(make(spec), args.doubled)
    out.artifact(f.to_json())
    return EXIT_OK


def cmd_double(args, out):
    f = _load(out, args.map)
    out.artifact(doubled(f, args.k).to_json())
    return EXIT_OK


def _horizons(n_max: int):
    # five horizons, geometric with ratio sqrt(2), ending at n_max
    hs = sorted({max(2, round(n_max / 2 ** (k / 2))) for k in range(5)})
    if len(hs) < 4:
        raise InsufficientData("--n-max too small for four distinct horizons")
    return tuple(hs)


def cmd_sep_estimate(args, out):
    if (args.map is None) == (args.logistic is None):
        raise UsageError("give exactly one of a map file or --logistic LAMBDA")
    f = logistic_map(args.logistic) if args.logistic is not None else _load(out, args.map)
    kw = {"seed": args.seed}
    if args.eps:
        kw["epsilons"] = tuple(sorted(args.eps, reverse=True))
    if args.n_max:
        kw["horizons"] = _horizons(args.n_max)
    est = slope_estimate(f, OracleConfig(**kw))
    result = est.to_json()
    result["table"] = [{"epsilon": e, "n": n, "count": c} for e, n, c in est.rows()]
    out.report(result, rows=est.rows(), header=["epsilon", "n", "count"])
    return EXIT_OK


def _profile(args, out):
    out.note_input(args.input)
    return complexity(load_sequence(args.input), args.n_max)


def cmd_subshift(args, out):
    prof = _profile(args, out)
    est = subshift_hpol_estimate(prof)
    result = {"profile": prof.to_json(), "estimate": est.to_json()}
    rows = [(n, w) for n, w in enumerate(prof.omega)]
    out.report(result, rows=rows, header=["n", "omega"])
    return EXIT_OK


def cmd_dendrite_bound(args, out):
    prof = _profile(args, out)
    bracket = dendrite_hpol_bracket(prof)
    rows = [(n, dendrite_sep_lower(prof, n)) for n in range(prof.n_max // 2 + 1)]
    result = {"bracket": bracket.to_json(), "sep_lower": [c for _, c in rows],
              "reliable_horizon": prof.reliable_horizon}
    out.report(result, rows=rows, header=["n", "sep_lower_2n"])
    return EXIT_OK


def _sweep_chunks(lams, threads):
    if threads <= 1 or len(lams) < 2:
        return sweep(lams)
    chunks = np.array_split(np.asarray(lams), threads)
    with ProcessPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(sweep, chunks)
    return [v for part in parts for v in part]


def cmd_logistic(args, out):
    if (args.lam is None) == (args.sweep is None):
        raise UsageError("give exactly one of --lambda or --sweep")
    lams = [args.lam] if args.lam is not None else list(parse_sweep(args.sweep))
    verdicts = _sweep_chunks(lams, args.threads)
    rows = [(round(v.lam, 10), v.attractor.period if v.attractor.period else "", v.h_pol) for v in verdicts]
    result = verdicts[0].to_json() if args.lam is not None else [v.to_json() for v in verdicts]
    out.report(result, rows=rows, header=["lambda", "period", "h_pol"])
    return EXIT_UNKNOWN if any(v.h_pol == UNKNOWN for v in verdicts) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", "-o", help="write output here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="oracle RNG seed")
    common.add_argument("--budget", type=int, default=4,
                        help="probe periods up to 2^(budget+1) when classifying")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--format", choices=("json", "csv"), default="json")

    p = _Parser(prog="polyent", description="Polynomial entropy of interval maps.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("hpol", parents=[common], help="exact polynomial entropy")
    s.add_argument("map")
    s.set_defaults(func=cmd_hpol)

    s = sub.add_parser("structure", parents=[common], help="essential intervals and covering DAG")
    s.add_argument("map")
    s.set_defaults(func=cmd_structure)

    s = sub.add_parser("horseshoe", parents=[common], help="emit a horseshoe certificate")
    s.add_argument("map")
    s.add_argument("--simple-cycle", type=int, metavar="N",
                   help="build from a simple 2^N-cycle instead of a chain")
    s.set_defaults(func=cmd_horseshoe)

    s = sub.add_parser("verify", parents=[common], help="re-check a horseshoe certificate")
    s.add_argument("map")
    s.add_argument("cert")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("family", parents=[common], help="write a reference map")
    s.add_argument("--kind", required=True, choices=("f0", "gn", "plateau", "tent", "identity"))
    s.add_argument("--n", type=int, default=0, help="index for gn")
    s.add_argument("--doubled", type=int, default=0, help="apply the doubling operator this often")
    s.set_defaults(func=cmd_family)

    s = sub.add_parser("double", parents=[common], help="apply the doubling operator")
    s.add_argument("map")
    s.add_argument("-k", type=int, default=1)
    s.set_defaults(func=cmd_double)

    s = sub.add_parser("sep-estimate", parents=[common], help="floating-point separated-set estimate")
    s.add_argument("map", nargs="?")
    s.add_argument("--logistic", type=float, metavar="LAMBDA")
    s.add_argument("--eps", type=float, nargs="+")
    s.add_argument("--n-max", type=int)
    s.set_defaults(func=cmd_sep_estimate)

    for name, func, helptext in (
        ("subshift", cmd_subshift, "word complexity of a symbol sequence"),
        ("dendrite-bound", cmd_dendrite_bound, "dendrite extension entropy bracket"),
    ):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--input", required=True)
        s.add_argument("--n-max", type=int, default=64)
        s.set_defaults(func=func)

    s = sub.add_parser("logistic", parents=[common], help="logistic family verdicts")
    s.add_argument("--lambda", dest="lam", type=float)
    s.add_argument("--sweep", metavar="START:STOP:STEP")
    s.set_defaults(func=cmd_logistic)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, Output(args, argv))
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_ERROR
    except (PolyentError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
