"""Command line interface.

Exit codes: 0 success, 1 unreadable or malformed input, 2 design with zero
edges, 3 the three module methods disagree, 4 split without two valid sides.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .estimator import ModuleDecomposition
from .exceptions import DegenerateDesignError, DesignError
from .ingest import load_design
from .modularity import SPLIT_THRESHOLD, split_module
from .report import build_report, matrix_csv, split_report, split_to_text, to_dot, to_json, to_text

EXIT_OK, EXIT_INPUT, EXIT_DEGENERATE, EXIT_DISAGREE, EXIT_INVALID_SPLIT = 0, 1, 2, 3, 4

MATRICES = ("degree", "adjacency", "laplacian", "density")


class _Parser(argparse.ArgumentParser):
    # exit 2 is reserved for zero-edge designs
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _add_common(p):
    p.add_argument("path", type=Path, help="design (.sfd), circuit (.qhc) or JSON (.json) file")
    p.add_argument("--format", choices=("design", "circuit", "json"), help="input format (default: by extension)")
    p.add_argument("--tolerance", type=float, default=None, help="zero threshold for Laplacian eigenvalues")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sfmodules", description="Spectral and density-matrix module analysis of software designs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="full module analysis report")
    _add_common(p)
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.add_argument("--split-threshold", type=float, default=SPLIT_THRESHOLD)
    p.add_argument("--verbose-projectors", action="store_true", help="include the 1/d coefficient in projector terms")
    p.add_argument("--matrices", action="store_true", help="include D, A, L and rho in the report")

    p = sub.add_parser("matrices", help="write one design matrix as CSV")
    _add_common(p)
    p.add_argument("which", choices=MATRICES)
    p.add_argument("-o", "--out", type=Path, help="output file (default: stdout)")

    p = sub.add_parser("split", help="Fiedler bisection of one module")
    _add_common(p)
    p.add_argument("selector", help="id of any vertex in the module to split")
    p.add_argument("--split-threshold", type=float, default=SPLIT_THRESHOLD)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("dot", help="write the bipartite graph with module clusters as DOT")
    _add_common(p)
    p.add_argument("-o", "--out", type=Path, help="output file (default: stdout)")
    return parser


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _fit(args, threshold=SPLIT_THRESHOLD) -> ModuleDecomposition:
    design = load_design(args.path, args.format)
    return ModuleDecomposition(tol=args.tolerance, split_threshold=threshold).fit(design)


def run(args) -> int:
    if args.command == "analyze":
        est = _fit(args, args.split_threshold)
        report = build_report(est, include_matrices=args.matrices, verbose_projectors=args.verbose_projectors)
        sys.stdout.write(to_json(report) if args.json else to_text(report))
    elif args.command == "matrices":
        est = _fit(args)
        which = args.which
        _emit(matrix_csv(est.matrices_.get(which), est.order_, integer=which != "density"), args.out)
    elif args.command == "dot":
        est = _fit(args)
        _emit(to_dot(est.design_, est.partitions_["oracle"].groups), args.out)
    elif args.command == "split":
        est = _fit(args, args.split_threshold)
        try:
            index = est.order_.index(args.selector)
        except KeyError:
            print(f"error: unknown module selector {args.selector!r}", file=sys.stderr)
            return EXIT_INPUT
        module = est.partitions_["oracle"].group_of(index)
        rep = split_report(est.design_, split_module(est.design_, module), args.split_threshold)
        sys.stdout.write(to_json(rep) if args.json else split_to_text(rep))
        if not est.agreement_:
            return EXIT_DISAGREE
        return EXIT_OK if rep["valid"] else EXIT_INVALID_SPLIT
    if not est.agreement_:
        print(f"error: {est.warnings_[-1]}", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except DegenerateDesignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (DesignError, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
