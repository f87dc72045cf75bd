"""
Command-line front end.

    python main.py quiver  [--surface S] [-n N]
    python main.py map     --word W | --program P [--mode symbolic]
    python main.py torsion --word W | --program P [--seed-strategy ...] [--mode exact -d D]

Exit codes: 0 ok, 2 invalid input, 3 mathematical diagnosis, 4 internal inconsistency,
5 unexpected Python exception.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional

from app.cli.job_spec import JobSpec, job_from_args
from app.core.cluster.mapping import mapping_class_map, symbolic_map
from app.core.pipeline.config_manager import DEFAULT_RNG_SEED, DEFAULT_STARTS
from app.core.pipeline.processor import MODES, SEED_STRATEGIES, full_pipeline
from app.core.quiver.quiver import Quiver, build_quiver
from app.core.ratfun.text_format import format_rational
from app.core.surface.builtin import TORUS
from app.core.torsion.report import render_text, report_to_dict
from app.utils.exceptions import (
    ClusterTorsionError,
    ComputationDiagnosis,
    EvaluationSingularError,
    MultiplicityMismatchError,
    SizeCapExceededError,
    ValidationError,
)
from app.utils.file_io import dump_json, write_text

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DIAGNOSIS = 3
EXIT_CONSISTENCY = 4
EXIT_INTERNAL = 5


# ============================================================================
# COMMANDS
# ============================================================================

def render_quiver(q: Quiver, edge_names, title: str) -> str:
    lines = [f"{title}: {len(q)} vertices, {len(q.arrows())} arrows"]
    lines.extend(f"  y{i + 1}  {v.label(edge_names)}" for i, v in enumerate(q.vertices))
    lines.append("arrows:")
    for i, j, mult in q.arrows():
        suffix = f"  (x{mult})" if mult > 1 else ""
        lines.append(f"  y{i + 1} -> y{j + 1}{suffix}")
    return "\n".join(lines) + "\n"


def cmd_quiver(spec: JobSpec) -> str:
    tri = spec.surface
    q = build_quiver(tri, spec.rank)
    if spec.as_json:
        return dump_json(dict(surface=tri.name, **q.to_dict(tri.edge_names)))
    return render_quiver(q, tri.edge_names, f"Q_(T,{spec.rank}) on {tri.name or 'custom surface'}")


def cmd_map(spec: JobSpec) -> str:
    tri = spec.surface
    m = mapping_class_map(tri, spec.word, spec.rank)
    if spec.mode == "symbolic":
        sym = symbolic_map(m, cap=spec.config.gcd_term_cap)
        texts = [format_rational(f) for f in sym.components]
        if spec.as_json:
            return dump_json({"components": texts, "reduced": [f.reduced for f in sym.components]})
        lines = [f"phi*(y{i + 1}) = {text}" for i, text in enumerate(texts)]
        if not sym.reduced:
            lines.append("(some components are left unreduced: gcd term cap reached)")
        return "\n".join(lines) + "\n"
    if spec.as_json:
        return dump_json(m.to_dict(tri.edge_names))
    lines = [f"cluster map on {m.dimension} coordinates: {m.mutation_count} mutations"]
    for step in m.to_dict()["steps"]:
        if "mutate" in step:
            lines.append(f"  mutate y{step['mutate'] + 1}")
        else:
            lines.append("  permute " + " ".join(f"y{i + 1}" for i in step["permute"]))
    return "\n".join(lines) + "\n"


def cmd_torsion(spec: JobSpec, *, show_progress: bool = False):
    def status(text: str, percent: int) -> None:
        logger.info("[%3d%%] %s", percent, text)

    return full_pipeline(
        spec.surface,
        spec.word,
        spec.rank,
        spec.seed_strategy,
        config=spec.config,
        point=spec.point,
        mode=spec.mode,
        discriminant=spec.discriminant,
        show_progress=show_progress,
        status_callback=status,
    )


# ============================================================================
# ARGUMENTS
# ============================================================================

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--surface", default=TORUS, help="built-in surface name or JSON triangulation path")
    p.add_argument("-n", "--rank", type=int, default=3, help="rank n of the cluster variety (default 3)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("-o", "--output", default=None, help="write to this file instead of stdout")
    p.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug (stderr)")
    p.add_argument("--threads", type=int, default=None, help="worker threads (overrides MTT_THREADS)")


def _add_word(p: argparse.ArgumentParser) -> None:
    p.add_argument("--word", default=None, help='word in the letters L and R ("" is the empty word)')
    p.add_argument("--program", default=None, help="JSON flip program for a generic mapping class")
    p.add_argument("--mode", choices=MODES, default="numeric")
    p.add_argument("-d", "--discriminant", type=int, default=None, help="d of Q(sqrt(d)) for exact mode")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mapping-torus-torsion",
        description="Twisted Alexander polynomials and torsion of surface mapping tori via cluster mutations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("quiver", help="print the quiver Q_(T,n)")
    _add_common(q)

    m = sub.add_parser("map", help="cluster map of a mapping class")
    _add_common(m)
    _add_word(m)

    t = sub.add_parser("torsion", help="fixed point, det(tJ - I) and torsion")
    _add_common(t)
    _add_word(t)
    t.add_argument("--seed-strategy", choices=SEED_STRATEGIES, default=None,
                   help="default: pgl2 for n > 2, multistart for n = 2")
    t.add_argument("--point", default=None, help='seed for the user strategy, "re,im;re,im;..."')
    t.add_argument("--rng-seed", type=int, default=DEFAULT_RNG_SEED)
    t.add_argument("--starts", type=int, default=DEFAULT_STARTS)
    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def exit_code_for(exc: ClusterTorsionError) -> int:
    if isinstance(exc, ValidationError):
        return EXIT_VALIDATION
    if isinstance(exc, (ComputationDiagnosis, EvaluationSingularError, SizeCapExceededError)):
        return EXIT_DIAGNOSIS
    return EXIT_CONSISTENCY


def _report_error(exc: ClusterTorsionError) -> None:
    where = f" [{exc.stage}]" if exc.stage else ""
    print(f"error{where}: {exc}", file=sys.stderr)
    if isinstance(exc, MultiplicityMismatchError) and exc.report is not None:
        print(render_text(exc.report), file=sys.stderr, end="")


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    handlers: Dict[str, Callable[[JobSpec], str]] = {
        "quiver": cmd_quiver,
        "map": cmd_map,
    }
    try:
        spec = job_from_args(args)
        if spec.command == "torsion":
            report = cmd_torsion(spec, show_progress=args.verbose > 0)
            text = dump_json(report_to_dict(report)) if spec.as_json else render_text(report)
        else:
            text = handlers[spec.command](spec)
    except ClusterTorsionError as exc:
        _report_error(exc)
        return exit_code_for(exc)
    except (ArithmeticError, IndexError, TypeError, ValueError) as exc:
        logger.debug("unexpected failure", exc_info=True)
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    write_text(spec.output, text)
    return EXIT_OK
