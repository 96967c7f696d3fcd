"""Command-line entry point: check, crosscheck, eisenhart, sample.

Exit codes: 0 pass/consistent, 1 inconsistency or discrepancy, 2 usage/config error.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from app.core.config import settings
from app.core.error_handling import ConfigInvalid, WorkbenchError
from app.core.logging_config import get_logger
from app.models.family import FamilyConfig, load_family_config
from app.models.fields import EisenhartInput
from app.models.report import EisenhartReport, SampleReport
from app.services.crosscheck import run_crosscheck
from app.services.eisenhart import eisenhart_at
from app.services.metrics import singular_distance
from app.services.sampling import parse_box, sample_points
from app.services.verdict import run_check

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INCONSISTENT = 1
EXIT_USAGE = 2


class _Parser(argparse.ArgumentParser):
    """Usage errors go to stderr with exit code 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, help="FamilyConfig JSON file")
    p.add_argument("--samples", type=int, default=10, help="number of sampled chart points")
    p.add_argument("--seed", type=int, default=0, help="sampler seed")
    p.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    p.add_argument("--box", default=None, help="LO:HI sampling interval for every coordinate")
    p.add_argument("--misprint-mode", choices=("literal", "alt"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hspace-bench", description=f"{settings.APP_NAME} {settings.APP_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    check = sub.add_parser("check", help="verify the constant-curvature theorem for one config")
    _common(check)
    check.add_argument("--tol-cc", type=float, default=None)
    check.add_argument("--tol-cond", type=float, default=None)

    cross = sub.add_parser("crosscheck", help="closed-form vs brute-force curvature components")
    _common(cross)
    cross.add_argument("--tol", type=float, default=None)

    eis = sub.add_parser("eisenhart", help="Eisenhart residual for user-supplied h and phi")
    _common(eis)
    eis.add_argument("--fields", required=True, help="JSON with 'h' and 'phi' polynomial specs")
    eis.add_argument("--derivative", choices=("covariant", "partial"), default=None)
    eis.add_argument("--tol", type=float, default=None, help="fail (exit 1) above this residual")

    sample = sub.add_parser("sample", help="emit accepted sample points")
    _common(sample)
    return parser


def _load(args: argparse.Namespace) -> FamilyConfig:
    cfg = load_family_config(args.config)
    if args.misprint_mode is not None:
        cfg = cfg.model_copy(update={"misprint_mode": args.misprint_mode})
    return cfg


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n", encoding="utf-8")
        logger.info(f"report written to {path}")
    else:
        sys.stdout.write(text + "\n")


def _run_check(args, cfg: FamilyConfig, box) -> int:
    report = run_check(cfg, args.samples, args.seed, box, tol_cc=args.tol_cc, tol_cond=args.tol_cond)
    _emit(report.to_json(), args.out)
    return EXIT_OK if report.aggregate.verdict.consistent else EXIT_INCONSISTENT


def _run_crosscheck(args, cfg: FamilyConfig, box) -> int:
    report = run_crosscheck(cfg, args.samples, args.seed, box, tol=args.tol)
    _emit(report.to_json(), args.out)
    if not report.passed:
        sys.stderr.write(f"discrepant component families: {', '.join(report.discrepant)}\n")
        return EXIT_INCONSISTENT
    return EXIT_OK


def _run_eisenhart(args, cfg: FamilyConfig, box) -> int:
    path = Path(args.fields)
    if not path.is_file():
        raise ConfigInvalid(f"fields file not found: {path}")
    try:
        fields = EisenhartInput.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as exc:
        raise ConfigInvalid(f"{path}: {exc.error_count()} invalid field(s): {exc.errors()[0]['msg']}") from exc
    derivative = args.derivative or settings.EISENHART_DERIVATIVE
    points = sample_points(cfg, args.samples, args.seed, box)
    residuals = [eisenhart_at(cfg, fields, p, derivative) for p in points]
    report = EisenhartReport(
        family=cfg.tag,
        derivative=derivative,
        points=[p.x for p in points],
        residuals=residuals,
        residual_max=max(residuals),
        tolerance=args.tol,
    )
    _emit(report.to_json(), args.out)
    return EXIT_INCONSISTENT if report.passed is False else EXIT_OK


def _run_sample(args, cfg: FamilyConfig, box) -> int:
    points = sample_points(cfg, args.samples, args.seed, box)
    report = SampleReport(
        family=cfg.tag,
        seed=args.seed,
        points=[p.x for p in points],
        singular_distance=[singular_distance(cfg, p) for p in points],
    )
    _emit(report.to_json(), args.out)
    return EXIT_OK


COMMANDS = {
    "check": _run_check,
    "crosscheck": _run_crosscheck,
    "eisenhart": _run_eisenhart,
    "sample": _run_sample,
}


def run_cli(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _load(args)
        box = parse_box(args.box) if args.box else None
        return COMMANDS[args.command](args, cfg, box)
    except WorkbenchError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return exc.exit_code


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
