"""Command-line interface.

Subcommands::

    gaussdetect detect DATA.csv [--method perm|gamma] [--permutations B] [--alpha A] [--seed S]
    gaussdetect simulate --out FILE [--n N] [--noise KIND] [--slope C] [--seed S]
    gaussdetect bench consistency|tpd [--sizes 400,800,1600] [--noise KINDS] [--batches B] ...

Exit status 0 means a verdict was produced (including ``Inconclusive``);
nonzero codes are reserved for operational failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import secrets
import sys
from pathlib import Path

from .core import PairedSample
from .datagen import GenSpec, NoiseKind, generate
from .detector import gauss_detect
from .errors import DegenerateSeries, InsufficientSample
from .experiments import ExperimentConfig, run_consistency, run_tpd
from .stattests import GaussianityTest, HsicMethod, IndependenceTestConfig

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MALFORMED_CSV = 2
EXIT_TOO_FEW_ROWS = 3
EXIT_DEGENERATE = 4
EXIT_UNWRITABLE = 5
EXIT_INVALID_CELL = 6

MIN_ROWS = 20
MIN_BENCH_BATCHES = 10

_DECISION_SCHEMA = {
    "type": "object",
    "required": ["statistic", "p_value", "reject"],
    "properties": {
        "statistic": {"type": "number"},
        "p_value": {"type": "number", "minimum": 0, "maximum": 1},
        "reject": {"type": "boolean"},
    },
}

DETECT_REPORT_SCHEMA = {
    "type": "object",
    "required": ["verdict", "h10", "h20", "tests_performed", "config"],
    "properties": {
        "verdict": {"enum": ["XtoY", "YtoX", "GaussianNoise", "Inconclusive"]},
        "algorithm": {"type": "string"},
        "n": {"type": "integer"},
        "h10": _DECISION_SCHEMA,
        "h20": _DECISION_SCHEMA,
        "tests_performed": {"type": "integer", "minimum": 1},
        "config": {
            "type": "object",
            "required": ["method", "permutations", "alpha", "seed"],
            "properties": {
                "method": {"enum": ["perm", "gamma"]},
                "permutations": {"type": "integer"},
                "alpha": {"type": "number"},
                "seed": {"type": "integer"},
            },
        },
    },
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class CliError(Exception):
    def __init__(self, message: str, status: int):
        super().__init__(message)
        self.status = status


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _alpha(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError("alpha must lie in (0, 1)")
    return value


def _sizes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _noise_list(text: str) -> tuple[NoiseKind, ...]:
    try:
        return tuple(NoiseKind(s.strip().lower()) for s in text.split(",") if s.strip())
    except ValueError:
        choices = ", ".join(k.value for k in NoiseKind)
        raise argparse.ArgumentTypeError(f"noise kinds must be among: {choices}") from None


def _add_test_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=_alpha, default=0.05, help="significance level (default 0.05)")
    p.add_argument("--method", choices=[m.value for m in HsicMethod], default="perm", help="HSIC null")
    p.add_argument("--permutations", type=_positive_int, default=500, help="permutation count (default 500)")
    p.add_argument("--seed", type=int, default=None, help="master seed; printed to stderr when omitted")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gaussdetect", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="infer the causal direction between the first two CSV columns")
    p.add_argument("input", help="CSV file, or - for stdin")
    _add_test_flags(p)
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("simulate", help="write a synthetic x,y CSV")
    p.add_argument("--out", required=True, help="output CSV path, or - for stdout")
    p.add_argument("--n", type=int, default=1600)
    p.add_argument("--noise", choices=[k.value for k in NoiseKind], default="laplace")
    p.add_argument("--slope", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("bench", help="run the consistency or tests-per-decision experiment")
    p.add_argument("kind", choices=["consistency", "tpd"])
    _add_test_flags(p)
    p.add_argument("--sizes", type=_sizes, default=(400, 800, 1600), help="comma-separated sample sizes")
    p.add_argument("--noise", type=_noise_list, default=tuple(NoiseKind), help="comma-separated noise kinds")
    p.add_argument("--batches", type=int, default=100)
    p.add_argument("--gt", choices=[g.value for g in GaussianityTest], default="jb", help="Gaussianity test")
    p.add_argument("--slope", type=float, default=2.0)
    p.add_argument("--out", default=".", help="directory for <kind>.csv and <kind>.json")
    return parser


def _resolve_seed(seed: int | None) -> int:
    if seed is None:
        seed = secrets.randbelow(2**32)
        print(f"seed: {seed}", file=sys.stderr)
    if seed < 0:
        raise CliError("--seed must be non-negative", EXIT_USAGE)
    return seed


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror or exc}", EXIT_UNWRITABLE) from None


def read_pair_csv(text: str) -> tuple[PairedSample, tuple[str, str]]:
    """Parse the first two numeric columns of CSV text.

    A first row whose leading fields are not numeric is treated as a header.
    """
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(f.strip() for f in r)]
    if not rows:
        raise CliError("input is empty", EXIT_MALFORMED_CSV)
    names = ("column 1", "column 2")
    first = rows[0]
    if len(first) >= 2:
        try:
            float(first[0]), float(first[1])
        except ValueError:
            names = (first[0].strip() or names[0], first[1].strip() or names[1])
            rows = rows[1:]
    xs, ys = [], []
    for lineno, row in enumerate(rows, start=1):
        if len(row) < 2:
            raise CliError(f"data row {lineno}: expected at least 2 columns, got {len(row)}", EXIT_MALFORMED_CSV)
        try:
            x, y = float(row[0]), float(row[1])
        except ValueError:
            raise CliError(f"data row {lineno}: non-numeric value in {row[:2]}", EXIT_MALFORMED_CSV) from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise CliError(f"data row {lineno}: non-finite value", EXIT_MALFORMED_CSV)
        xs.append(x)
        ys.append(y)
    if len(xs) < MIN_ROWS:
        raise CliError(f"need at least {MIN_ROWS} data rows, got {len(xs)}", EXIT_TOO_FEW_ROWS)
    for name, values in zip(names, (xs, ys)):
        if min(values) == max(values):
            raise CliError(f"{name} is constant", EXIT_DEGENERATE)
    return PairedSample(xs, ys), names


def _read_input(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_MALFORMED_CSV) from None


def _format_number(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)


def cmd_detect(args) -> int:
    seed = _resolve_seed(args.seed)
    try:
        cfg = IndependenceTestConfig(
            method=args.method, permutations=args.permutations, alpha=args.alpha, rng_seed=seed
        )
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    sample, _ = read_pair_csv(_read_input(args.input))
    try:
        report = gauss_detect(sample, cfg)
    except DegenerateSeries as exc:
        raise CliError(f"degenerate data: {exc}", EXIT_DEGENERATE) from None
    except InsufficientSample as exc:
        raise CliError(str(exc), EXIT_TOO_FEW_ROWS) from None

    doc = report.to_dict()
    doc.pop("gaussianity")
    doc["n"] = sample.n
    doc["config"] = {"method": cfg.method.value, "permutations": cfg.permutations, "alpha": cfg.alpha, "seed": seed}
    if args.format == "json":
        text = json.dumps(doc, indent=2) + "\n"
    else:
        fields = {
            "verdict": doc["verdict"],
            "tests_performed": doc["tests_performed"],
            "n": doc["n"],
        }
        for h in ("h10", "h20"):
            for key, value in doc[h].items():
                fields[f"{h}_{key}"] = value
        fields.update(doc["config"])
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(fields)
        writer.writerow(_format_number(v) for v in fields.values())
        text = buf.getvalue()
    _write_text(args.out, text)
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.n < MIN_ROWS:
        raise CliError(f"--n must be at least {MIN_ROWS}, got {args.n}", EXIT_USAGE)
    seed = _resolve_seed(args.seed)
    sample = generate(GenSpec(n=args.n, noise=args.noise, seed=seed, slope=args.slope))
    lines = ["x,y"]
    lines.extend(f"{x:.17g},{y:.17g}" for x, y in zip(sample.x, sample.y))
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _bench_table(kind: str, rows: list[dict]) -> str:
    wanted = "consistency_rate" if kind == "consistency" else "mean_tpd"
    lines = []
    for r in rows:
        if r["metric"] != wanted:
            continue
        label = f"{r['noise']:<12}n={r['n']:<6}"
        if "algorithm" in r:
            label += f"{r['algorithm']:<18}"
        lines.append(f"{label}{wanted}={r['value']:.4f}")
    return "\n".join(lines) + "\n"


def cmd_bench(args) -> int:
    if args.batches < MIN_BENCH_BATCHES:
        raise CliError(f"--batches must be at least {MIN_BENCH_BATCHES}", EXIT_USAGE)
    seed = _resolve_seed(args.seed)
    try:
        it_cfg = IndependenceTestConfig(method=args.method, permutations=args.permutations, alpha=args.alpha)
        cfg = ExperimentConfig(
            sample_sizes=args.sizes,
            noise_kinds=args.noise,
            batches=args.batches,
            alpha=args.alpha,
            it_cfg=it_cfg,
            gt=args.gt,
            slope=args.slope,
            master_seed=seed,
        )
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None

    report = run_consistency(cfg) if args.kind == "consistency" else run_tpd(cfg)
    rows = report.rows()
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliError(f"cannot create {out_dir}: {exc.strerror or exc}", EXIT_UNWRITABLE) from None

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: _format_number(v) for k, v in r.items()})
    _write_text(str(out_dir / f"{args.kind}.csv"), buf.getvalue())
    _write_text(str(out_dir / f"{args.kind}.json"), json.dumps(report.summary(), indent=2) + "\n")
    sys.stdout.write(_bench_table(args.kind, rows))

    invalid = report.invalid_cells
    if invalid:
        names = ", ".join(f"{c.noise.value}/n={c.n}" for c in invalid)
        raise CliError(f"invalid cells (more than 10% excluded batches): {names}", EXIT_INVALID_CELL)
    return EXIT_OK


COMMANDS = {"detect": cmd_detect, "simulate": cmd_simulate, "bench": cmd_bench}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(f"gaussdetect {args.command}: {exc}", file=sys.stderr)
        return exc.status


if __name__ == "__main__":
    sys.exit(main())
