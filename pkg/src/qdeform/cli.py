"""Command line interface.

Subcommands::

    qdeform deform FILE      simplest miniversal deformation of the matrices
    qdeform chain FILE       same, assembled from the interval list of a chain
    qdeform reduce FILE      reduce matrices + perturbation to normal form
    qdeform codim FILE       number of parameters (orbit codimension)

Exit codes: 0 success, 1 parse or validation error, 2 no convergence,
3 failed internal self-check.  ``QDEFORM_TOL`` overrides the default rank
tolerance.
"""
import argparse
import csv
from dataclasses import dataclass
import json
import os
import sys

import numpy as np

from . import __version__
from .chain import ChainShape, chain_miniversal
from .deformation import (DEFAULT_TOL, DeformationTemplate, Verdict,
                          parameter_count, select_gamma, verify_decomposition)
from .exceptions import NoConvergence, PreconditionViolated, QDeformError
from .fileformat import ParseError, read_problem
from .reducer import reduce, window_schedule

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO_CONVERGENCE = 2
EXIT_SELF_CHECK = 3


class CrossValidationMismatch(QDeformError):
    """Chain assembly and direct computation disagree."""


def _real_text(x):
    x = float(x)
    return str(int(x)) if x.is_integer() and abs(x) < 1e16 else repr(x)


def _entry(x):
    """Shortest text for a display entry: ``1``, ``0.25``, ``1-2i``."""
    if isinstance(x, (complex, np.complexfloating)) and x.imag != 0:
        im = x.imag
        sign = "-" if im < 0 else "+"
        re_ = "" if x.real == 0 else _real_text(x.real)
        return f"{re_}{sign if re_ or im < 0 else ''}{_real_text(abs(im))}i"
    return _real_text(np.real(x))


def render_matrix(m, slots=None):
    """``[a b; c d]`` with parameter tokens at ``slots`` ((i, j) -> token)."""
    slots = slots or {}
    if m.size == 0:
        return f"[] ({m.shape[0]}x{m.shape[1]})"
    rows = []
    for i, row in enumerate(m, 1):
        cells = []
        for j, x in enumerate(row, 1):
            token = slots.get((i, j))
            if token is None:
                cells.append(_entry(x))
            elif x == 0:
                cells.append(token)
            else:
                cells.append(f"{_entry(x)}+{token}")
        rows.append(" ".join(cells))
    return "[" + "; ".join(rows) + "]"


@dataclass
class DeformationReport:
    template: DeformationTemplate
    verdict: Verdict

    def arrows(self):
        base = self.template.base
        labels = self.template.labels
        out = []
        for a, m in zip(base.quiver.arrows, base.matrices):
            slots = {(g.i, g.j): tok for g, tok in labels.items() if g.arrow == a.id}
            out.append((a, render_matrix(m, slots)))
        return out

    def to_dict(self):
        t = self.template
        return {
            "dims": list(t.base.dims),
            "arrows": [{"arrow": a.id, "source": a.source, "target": a.target,
                        "matrix": text} for a, text in self.arrows()],
            "parameters": [list(g) for g in t.gamma],
            "parameter_count": t.parameter_count,
            "space_dim": t.base.space_dim,
            "verdict": self.verdict.value,
        }

    def text(self):
        t = self.template
        lines = [f"dims: {' '.join(map(str, t.base.dims))}"]
        lines += [f"arrow {a.id} ({a.source}->{a.target}): {text}"
                  for a, text in self.arrows()]
        lines.append(f"parameters: {t.parameter_count}")
        lines.append(f"codimension: {t.parameter_count} of {t.base.space_dim} "
                     "(orbit codimension in the space of representations)")
        lines.append(f"verdict: {self.verdict.value}")
        return "\n".join(lines)


def _rank_tol(args):
    if getattr(args, "tol", None) is not None and args.command != "reduce":
        return args.tol
    env = os.environ.get("QDEFORM_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            raise ParseError(f"QDEFORM_TOL={env!r} is not a number") from None
    return DEFAULT_TOL


def _emit(args, report_dict, text, out):
    if args.json:
        json.dump(report_dict, out, indent=2, default=str)
        out.write("\n")
    else:
        out.write(text + "\n")


def cmd_deform(args, out):
    tol = _rank_tol(args)
    problem = read_problem(args.file)
    A = problem.representation
    template = DeformationTemplate(A, select_gamma(A, tol))
    verdict = verify_decomposition(A, template.gamma, tol)
    report = DeformationReport(template, verdict)
    _emit(args, report.to_dict(), report.text(), out)
    return EXIT_OK if verdict is Verdict.MINIVERSAL else EXIT_SELF_CHECK


def cmd_chain(args, out):
    tol = _rank_tol(args)
    problem = read_problem(args.file)
    if not problem.intervals:
        raise ParseError("chain needs 'interval' lines")
    try:
        shape = ChainShape.from_quiver(problem.quiver)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    template = chain_miniversal(shape, problem.intervals, tol)
    direct = select_gamma(template.base, tol)
    verdict = verify_decomposition(template.base, template.gamma, tol)
    report = DeformationReport(template, verdict)
    _emit(args, report.to_dict(), report.text(), out)
    if set(direct) != set(template.gamma):
        raise CrossValidationMismatch(
            f"chain assembly {template.gamma} != direct selection {direct}")
    return EXIT_OK if verdict is Verdict.MINIVERSAL else EXIT_SELF_CHECK


def cmd_codim(args, out):
    problem = read_problem(args.file)
    k = parameter_count(problem.representation, _rank_tol(args))
    if args.json:
        json.dump({"parameter_count": k}, out)
        out.write("\n")
    else:
        out.write(f"{k}\n")
    return EXIT_OK


def _write_csv(path, result):
    sched = window_schedule(result.certificate.m, len(result.history))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "gamma_norm", "norm", "eps_i", "delta_i"])
        for i, ((g, n), (e, d)) in enumerate(zip(result.history, sched), 1):
            w.writerow([i, repr(g), repr(n), repr(e), repr(d)])


def cmd_reduce(args, out):
    problem = read_problem(args.file)
    if problem.perturbation is None:
        raise ParseError("reduce needs 'perturbation' blocks")
    tol = _rank_tol(args)
    A, M = problem.representation, problem.perturbation
    gamma = select_gamma(A, tol)
    try:
        result = reduce(A, gamma, M, target_tol=args.tol, max_iter=args.max_iter,
                        mode=args.mode, tol=tol)
    except NoConvergence as exc:
        if args.csv and exc.result is not None:
            _write_csv(args.csv, exc.result)
        out.write(f"no convergence: {exc}\n")
        return EXIT_NO_CONVERGENCE
    if args.csv:
        _write_csv(args.csv, result)
    identity = result.iterations == 0
    params = [{"slot": f"eps[{g.arrow}][{g.i}][{g.j}]", "value": _entry(v)}
              for g, v in result.parameters.items()]
    cert = result.certificate
    data = {
        "mode": result.mode,
        "best_effort": result.mode == "practical",
        "iterations": result.iterations,
        "final_gamma_norm": result.offslice,
        "parameters": params,
        "S_is_identity": identity,
        "S": [[[_entry(x) for x in row] for row in s] for s in result.S],
        "certificate": {"c": cert.c, "d": cert.d, "e": cert.e, "m": cert.m,
                        "radius": cert.radius},
    }
    lines = [f"mode: {result.mode}" + (" (best effort)" if data["best_effort"] else ""),
             f"iterations: {result.iterations}",
             f"final |residual|_gamma: {result.offslice:.3e}",
             f"certificate: m = {cert.m}, radius m^-7 = {cert.radius:.6e}",
             "S = I" if identity else "S: " + "  ".join(
                 f"v{v}={render_matrix(s)}" for v, s in enumerate(result.S, 1)),
             f"parameters: {len(params)}"]
    lines += [f"  {p['slot']} = {p['value']}" for p in params]
    _emit(args, data, "\n".join(lines), out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="qdeform", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [("deform", "simplest miniversal deformation"),
                        ("chain", "deformation of a sum of interval modules"),
                        ("codim", "number of parameters"),
                        ("reduce", "reduce a perturbation to normal form")]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("file")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if name == "reduce":
            p.add_argument("--tol", type=float, default=None,
                           help="target off-slice norm")
            p.add_argument("--mode", choices=("certified", "practical"),
                           default="practical")
            p.add_argument("--max-iter", type=int, default=100)
            p.add_argument("--csv", metavar="PATH",
                           help="write the per-iteration history")
        else:
            p.add_argument("--tol", type=float, default=None,
                           help="relative rank tolerance")
    return parser


_COMMANDS = {"deform": cmd_deform, "chain": cmd_chain,
             "codim": cmd_codim, "reduce": cmd_reduce}


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args, out)
    except CrossValidationMismatch as exc:
        print(f"self-check failed: {exc}", file=sys.stderr)
        return EXIT_SELF_CHECK
    except PreconditionViolated as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, QDeformError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
