"""Command-line front end: build, check, di and trace jobs with JSON artifacts.

Exit status is 0 when every requested verification passes, 1 when one fails
and 2 for invalid input.  ``CSD_LOG`` sets the log level (e.g. ``DEBUG``).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .group import GroupError, ProductExpr, evaluate_product
from .identity import DEFAULT_SCALE_GRID, assemble_di, replay_trace_on_di, verify_di_numeric, verify_di_symbolic
from .lattice import FixedData, FixedDataError
from .scatter import (
    PentagonInapplicable,
    PositiveFormError,
    Rank2CSD,
    TraceError,
    build_csd,
    consistency_check,
    incoming_product,
    order_product,
    pentagon_sort_trace,
    positive_form,
)
from .series import SeriesError

log = logging.getLogger("csdilog")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
SLOPE_BAND = 0.3


class InputError(ValueError):
    pass


@dataclass
class JobConfig:
    command: str
    B: list[list[int]] | None = None
    delta: list[int] | None = None
    level: int | None = None
    output: str | None = None
    csd: str | None = None
    product: str | None = None
    symbolic: bool = False
    numeric: bool = False
    scale_check: bool = False
    samples: int = 100
    seed: int = 0
    scale_grid: list[float] = field(default_factory=lambda: list(DEFAULT_SCALE_GRID))
    mode: str = "exact"
    tol: float = 1e-10

    def validate(self) -> None:
        if self.command not in ("build", "check", "di", "trace"):
            raise InputError(f"unknown command {self.command!r}")
        if self.level is not None and self.level < 1:
            raise InputError("level must be at least 1")
        if self.csd is None and self.command in ("build", "di", "trace"):
            if self.B is None or self.delta is None or self.level is None:
                raise InputError(f"{self.command} needs --B, --delta and --level (or --csd)")
        if self.command == "check" and self.csd is None:
            raise InputError("check needs --csd")
        if self.samples < 1:
            raise InputError("--samples must be positive")
        if self.mode not in ("exact", "series"):
            raise InputError("--mode must be exact or series")

    def fixed_data(self) -> FixedData:
        return FixedData.from_lists(self.B, self.delta)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(cfg: JobConfig, obj) -> None:
    text = dumps(obj)
    if cfg.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(cfg.output, "w") as fh:
            fh.write(text)


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {path}: {exc}") from exc


def _load_csd(cfg: JobConfig) -> Rank2CSD:
    if cfg.csd is not None:
        csd = Rank2CSD.from_json(_read_json(cfg.csd))
        if cfg.level is not None and cfg.level != csd.level:
            raise InputError(f"--level {cfg.level} conflicts with the file's level {csd.level}")
        return csd
    return build_csd(cfg.fixed_data(), cfg.level)


def _build(cfg: JobConfig) -> int:
    csd = build_csd(cfg.fixed_data(), cfg.level)
    _emit(cfg, csd.to_json())
    return EXIT_OK


def _check(cfg: JobConfig) -> int:
    csd = _load_csd(cfg)
    ok = consistency_check(csd)
    positive = True
    for f in csd.all_factors():
        try:
            positive_form(csd.fd, f)
        except PositiveFormError:
            positive = False
    result = {"consistent": ok, "positive": positive, "level": csd.level, "walls": len(csd.walls)}
    _emit(cfg, result)
    log.info("consistency %s, positive form %s", ok, positive)
    return EXIT_OK if ok and positive else EXIT_FAIL


def _di(cfg: JobConfig) -> int:
    csd = _load_csd(cfg)
    terms = assemble_di(csd)
    want_symbolic = cfg.symbolic or not (cfg.numeric or cfg.scale_check)
    out: dict = {"level": csd.level, "fd": csd.fd.to_json(), "terms": [t.to_json() for t in terms]}
    ok = True
    if want_symbolic:
        rep = verify_di_symbolic(terms, csd.level, csd.fd.r)
        out["symbolic"] = rep.to_json()
        ok &= rep.symbolic_ok
    rng = np.random.default_rng(cfg.seed)
    points = rng.uniform(0.0, 1.0, size=(cfg.samples, csd.fd.r))
    if cfg.numeric:
        rep = verify_di_numeric(terms, points, fd=csd.fd, mode=cfg.mode)
        out["numeric"] = rep.to_json()
        out["numeric"]["tolerance"] = cfg.tol
        ok &= rep.max_residual() < cfg.tol
    if cfg.scale_check:
        rep = verify_di_numeric(terms, points, cfg.scale_grid, fd=csd.fd, mode=cfg.mode)
        target = csd.level + 1
        out["scaling"] = {"slope": rep.scaling_slope, "target": target, "band": SLOPE_BAND}
        ok &= abs(rep.scaling_slope - target) <= SLOPE_BAND
    out["pass"] = bool(ok)
    _emit(cfg, out)
    return EXIT_OK if ok else EXIT_FAIL


def _trace(cfg: JobConfig) -> int:
    fd = cfg.fixed_data()
    level = cfg.level
    start = ProductExpr.from_json(_read_json(cfg.product)) if cfg.product else incoming_product(fd)
    ordered, trace = pentagon_sort_trace(fd, level, start)
    reference = order_product(fd, level, start, check_positive=False)
    ok = ordered == reference and evaluate_product(fd, level, ordered) == evaluate_product(fd, level, start)
    states = replay_trace_on_di(trace)
    _emit(
        cfg,
        {
            "trace": trace.to_json(),
            "ordered": ordered.to_json(),
            "stages": [ProductExpr.of(s).to_json() for s in trace.pentagon_stages()],
            "di_terms_per_step": [len(s) for s in states],
            "pass": bool(ok),
        },
    )
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {"build": _build, "check": _check, "di": _di, "trace": _trace}


def run(cfg: JobConfig) -> int:
    try:
        cfg.validate()
        return COMMANDS[cfg.command](cfg)
    except (InputError, FixedDataError, GroupError, SeriesError, TraceError, PentagonInapplicable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def _int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.replace("[", "").replace("]", "").split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from exc


def _matrix(s: str) -> list[list[int]]:
    try:
        m = json.loads(s)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"--B must be a JSON matrix: {exc}") from exc
    if not isinstance(m, list) or not all(isinstance(row, list) for row in m):
        raise argparse.ArgumentTypeError("--B must be a list of rows")
    return m


def _grid(s: str) -> list[float]:
    """``lo,hi,n`` for a geometric grid or an explicit comma list."""
    parts = [float(x) for x in s.split(",")]
    if len(parts) == 3 and parts[2] == int(parts[2]) and parts[2] >= 2 and parts[0] < parts[1]:
        return [float(t) for t in np.geomspace(parts[0], parts[1], int(parts[2]))]
    return parts


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="csdilog", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def data_args(sp, level_flag="--level"):
        sp.add_argument("--B", type=_matrix, help="exchange matrix as JSON, e.g. [[0,-2],[2,0]]")
        sp.add_argument("--delta", type=_int_list, help="skew-symmetrizers, e.g. 2,2")
        sp.add_argument(level_flag, dest="level", type=int, help="truncation degree")
        sp.add_argument("-o", "--output", help="output file (default stdout)")

    data_args(sub.add_parser("build", help="build the truncated diagram"))
    sp = sub.add_parser("check", help="check consistency of a stored diagram")
    sp.add_argument("--csd", required=True, help="diagram JSON file or - for stdin")
    sp.add_argument("-o", "--output")
    sp = sub.add_parser("di", help="assemble and verify the dilogarithm identity")
    data_args(sp)
    sp.add_argument("--csd", help="use a stored diagram instead of building one")
    sp.add_argument("--symbolic", action="store_true")
    sp.add_argument("--numeric", action="store_true")
    sp.add_argument("--scale-check", action="store_true")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--scale-grid", type=_grid, default=list(DEFAULT_SCALE_GRID), help="lo,hi,n or t1,t2,...")
    sp.add_argument("--mode", choices=("exact", "series"), default="exact")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp = sub.add_parser("trace", help="order a product by pentagon moves and replay the identity")
    data_args(sp, level_flag="--max-level")
    sp.add_argument("--product", help="JSON product to sort (default: the incoming product)")
    return p


def config_from_args(ns: argparse.Namespace) -> JobConfig:
    known = {f for f in JobConfig.__dataclass_fields__}
    return JobConfig(**{k: v for k, v in vars(ns).items() if k in known})


def main(argv: Sequence[str] | None = None) -> int:
    name = os.environ.get("CSD_LOG", "WARNING").upper()
    level = logging.getLevelName(name)
    logging.basicConfig(
        level=level if isinstance(level, int) else logging.WARNING, format="%(levelname)s %(name)s: %(message)s"
    )
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
