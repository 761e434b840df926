"""``qswitch`` command line: single evaluations, sweeps, Table-1 style summaries
and local/global classification.

Exit codes: 0 success, 1 usage error, 2 optimizer did not converge.
"""
from __future__ import annotations

import argparse
import csv
from decimal import ROUND_DOWN, Decimal
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

from .holevo import OptimizerOptions, holevo_chi
from .orders import (
    OrderCombination,
    enumerate_combinations,
    global_pair_count,
    parse_labels,
    predict_class,
)
from .switch import SwitchSpec

EXIT_OK, EXIT_USAGE, EXIT_NONCONVERGED = 0, 1, 2

CSV_FIELDS = ["N", "d", "m", "combination", "q", "chi_bits", "h_control_bits", "h_min_bits",
              "global_pairs", "total_pairs", "predicted_class", "converged"]
FLOAT_FIELDS = {"chi_bits", "h_control_bits", "h_min_bits"}
INT_FIELDS = {"N", "d", "m", "global_pairs", "total_pairs"}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    N: int = 3
    d: int = 2
    q: list = field(default_factory=list)
    orders: list | str | None = None
    m: int | str | None = None
    weights: list | str = "uniform"
    tol: float = 1e-9
    starts: int = 32
    seed: int = 7
    format: str = "table"
    out: str | None = None
    dims: list = field(default_factory=lambda: [2, 3])
    plot_data: bool = False
    with_chi: bool = False

    def __post_init__(self):
        if not self.q:
            self.q = [0.0] * self.N
        if len(self.q) != self.N:
            raise UsageError(f"--q needs {self.N} values, got {len(self.q)}")
        if any(not 0.0 <= x <= 1.0 for x in self.q):
            raise UsageError("--q values must lie in [0, 1]")
        if self.weights != "uniform" and isinstance(self.orders, list):
            if len(self.weights) != len(self.orders):
                raise UsageError("--weights needs one value per order")

    def options(self) -> OptimizerOptions:
        return OptimizerOptions(starts=self.starts, seed=self.seed, tol=self.tol)


@dataclass(frozen=True)
class ResultRow:
    N: int
    d: int
    m: int
    combination: str
    q: str
    chi_bits: float
    h_control_bits: float
    h_min_bits: float
    global_pairs: int
    total_pairs: int
    predicted_class: str
    converged: bool


def _fmt_q(q) -> str:
    return ",".join(f"{x:g}" for x in q)


def _prediction(combo: OrderCombination) -> str:
    try:
        return predict_class(combo).value
    except ValueError:
        return "n/a"


def _pairs(combo: OrderCombination) -> tuple[int, int]:
    return global_pair_count(combo) if combo.m >= 2 else (0, 0)


def evaluate(d: int, q, combo: OrderCombination, opts: OptimizerOptions) -> ResultRow:
    combo = combo.sorted()
    spec = SwitchSpec.depolarizing(d, q, combo.labels, combo.weights)
    res = holevo_chi(spec, opts)
    g, t = _pairs(combo)
    return ResultRow(N=combo.n, d=d, m=combo.m, combination=combo.key(), q=_fmt_q(q),
                     chi_bits=round(res.chi, 6), h_control_bits=round(res.h_control, 6),
                     h_min_bits=round(res.h_min, 6), global_pairs=g, total_pairs=t,
                     predicted_class=_prediction(combo), converged=res.converged)


def _evaluate_task(args):
    return evaluate(*args)


def worker_count() -> int:
    env = os.environ.get("QSWITCH_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"QSWITCH_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def evaluate_many(tasks: list) -> list[ResultRow]:
    """Evaluate ``(d, q, combo, opts)`` tasks; results keep the task order."""
    workers = min(worker_count(), len(tasks))
    if workers <= 1:
        return [_evaluate_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_evaluate_task, tasks))


def _combination(cfg: RunConfig) -> OrderCombination:
    if not isinstance(cfg.orders, list):
        raise UsageError("--orders must list explicit labels, e.g. 1,4,5")
    weights = None if cfg.weights == "uniform" else cfg.weights
    try:
        return OrderCombination.from_labels(cfg.orders, cfg.N, weights)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _sizes(cfg: RunConfig) -> list[int]:
    total = math.factorial(cfg.N)
    if cfg.m in (None, "all") or cfg.orders == "all":
        return list(range(1, total + 1))
    if not 1 <= cfg.m <= total:
        raise UsageError(f"--m must lie in 1..{total}")
    return [cfg.m]


def _combinations(cfg: RunConfig) -> list[OrderCombination]:
    if isinstance(cfg.orders, list):
        return [_combination(cfg)]
    return [c for m in _sizes(cfg) for c in enumerate_combinations(cfg.N, m)]


def cmd_holevo(cfg: RunConfig) -> list[ResultRow]:
    return [evaluate(cfg.d, cfg.q, _combination(cfg), cfg.options())]


def cmd_sweep(cfg: RunConfig) -> list[ResultRow]:
    if isinstance(cfg.orders, list):
        raise UsageError("sweep takes --m N|all or --orders all")
    tasks = [(cfg.d, cfg.q, c, cfg.options()) for c in _combinations(cfg)]
    rows = evaluate_many(tasks)
    return sorted(rows, key=lambda r: (r.m, [int(k) for k in r.combination.split(",")]))


def truncate4(x: float) -> float:
    """Cut (not round) to 4 decimals, the convention of the published table."""
    return float(Decimal(f"{x:.6f}").quantize(Decimal("0.0001"), rounding=ROUND_DOWN))


def cmd_table1(cfg: RunConfig) -> list[dict]:
    """Per-m maximum and minimum chi for each target dimension in ``cfg.dims``."""
    if cfg.N != 3 or any(x != 0 for x in cfg.q):
        raise UsageError("table1 is defined for three completely depolarizing channels")
    opts = cfg.options()
    combos = [c for m in range(1, 7) for c in enumerate_combinations(3, m)]
    rows = evaluate_many([(d, cfg.q, c, opts) for d in cfg.dims for c in combos])
    return table1_from_rows(rows, cfg.dims)


def table1_from_rows(rows: list[ResultRow], dims) -> list[dict]:
    """Collapse sweep rows into the m x {max, min} x d layout.

    The minimum column is ``None`` where every combination of that size falls
    in one class (m = 5, 6). A trailing ``{"_converged": bool}`` record
    summarizes optimizer convergence.
    """
    table = []
    for m in range(1, 7):
        entry = {"m": m}
        for kind in ("max", "min"):
            for d in dims:
                sel = [r for r in rows if r.d == d and r.m == m]
                chis = [r.chi_bits for r in sel]
                if kind == "max":
                    entry[f"chi_max_d{d}"] = truncate4(max(chis))
                else:
                    single = m > 1 and len({r.predicted_class for r in sel}) == 1
                    entry[f"chi_min_d{d}"] = None if single else truncate4(min(chis))
        table.append(entry)
    table.append({"_converged": all(r.converged for r in rows)})
    return table


def cmd_classify(cfg: RunConfig) -> list[dict]:
    if cfg.N != 3:
        raise UsageError("classify is defined for N=3")
    out = []
    for combo in _combinations(cfg):
        combo = combo.sorted()
        g, t = _pairs(combo)
        row = {"combination": combo.key(), "m": combo.m, "global_pairs": g, "total_pairs": t,
               "predicted_class": _prediction(combo)}
        if cfg.with_chi:
            row["chi_bits"] = evaluate(cfg.d, cfg.q, combo, cfg.options()).chi_bits
        out.append(row)
    return out


# ---------------------------------------------------------------- output


def rows_to_csv(rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow([_cell(k, getattr(r, k)) for k in CSV_FIELDS])
    return buf.getvalue()


def _cell(key, value) -> str:
    if key in FLOAT_FIELDS:
        return f"{value:.6f}"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def rows_from_csv(text: str) -> list[ResultRow]:
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        kw = {}
        for k in CSV_FIELDS:
            v = rec[k]
            if k in FLOAT_FIELDS:
                kw[k] = float(v)
            elif k in INT_FIELDS:
                kw[k] = int(v)
            elif k == "converged":
                kw[k] = v == "true"
            else:
                kw[k] = v
        rows.append(ResultRow(**kw))
    return rows


def _dict_rows(rows) -> list[dict]:
    return [asdict(r) if isinstance(r, ResultRow) else dict(r) for r in rows]


def format_table(records: list[dict]) -> str:
    if not records:
        return ""
    keys = list(records[0])
    cells = [[_text(r.get(k)) for k in keys] for r in records]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    lines = ["  ".join(k.rjust(w) for k, w in zip(keys, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _text(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def format_table1(table: list[dict]) -> str:
    body = [r for r in table if "m" in r]
    keys = list(body[0])
    lines = ["  ".join(f"{k:>11}" for k in keys)]
    for r in body:
        vals = [f"{r['m']:>11}"] + ["{:>11}".format("-" if r[k] is None else f"{r[k]:.4f}")
                                    for k in keys[1:]]
        lines.append("  ".join(vals))
    return "\n".join(lines) + "\n"


def emit(records, fmt: str, kind: str = "rows") -> str:
    if kind == "table1":
        body = [r for r in records if "m" in r]
        if fmt == "table":
            return format_table1(records)
        if fmt == "json":
            return json.dumps(body, indent=2) + "\n"
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(body[0]), lineterminator="\n")
        w.writeheader()
        for r in body:
            w.writerow({k: "" if v is None else (f"{v:.4f}" if isinstance(v, float) else v)
                        for k, v in r.items()})
        return buf.getvalue()
    if fmt == "csv" and records and isinstance(records[0], ResultRow):
        return rows_to_csv(records)
    dicts = _dict_rows(records)
    if fmt == "json":
        return json.dumps(dicts, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        if dicts:
            w = csv.DictWriter(buf, fieldnames=list(dicts[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(dicts)
        return buf.getvalue()
    return format_table(dicts)


def plot_data(rows: list[ResultRow]) -> str:
    return "m,chi_bits\n" + "".join(f"{r.m},{r.chi_bits:.6f}\n" for r in rows)


# ---------------------------------------------------------------- parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed number list {text!r}") from None


def _labels_or_all(text: str):
    if text.strip() == "all":
        return "all"
    try:
        return parse_labels(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_or_all(text: str):
    if text.strip() == "all":
        return "all"
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'all', got {text!r}") from None


def _weights(text: str):
    return "uniform" if text.strip() == "uniform" else _floats(text)


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed integer list {text!r}") from None


BOOL_KEYS = {"plot_data", "with_chi"}


def read_config(path: str) -> dict:
    """Flat ``key=value`` file; keys are long option names (dashes or underscores)."""
    cfg = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key in BOOL_KEYS:
                cfg[key] = value.lower() in ("1", "true", "yes", "on")
            else:
                cfg[key] = value
    return cfg


def build_parser(file_defaults: dict | None = None) -> argparse.ArgumentParser:
    file_defaults = file_defaults or {}
    common = _Parser(add_help=False)
    common.add_argument("--config", help="flat key=value file supplying option defaults")
    common.add_argument("--channels", "-N", dest="N", type=int, default=3)
    common.add_argument("--dim", dest="d", type=int, default=2)
    common.add_argument("--q", type=_floats, default=None, help="depolarizing strengths, one per channel")
    common.add_argument("--orders", type=_labels_or_all, default=None, help="labels, e.g. 1,4,5, or 'all'")
    common.add_argument("--m", type=_int_or_all, default=None)
    common.add_argument("--weights", type=_weights, default="uniform")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--starts", type=int, default=32)
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--format", choices=["csv", "json", "table"], default="table")
    common.add_argument("--out", default=None)
    common.set_defaults(**{k: v for k, v in file_defaults.items() if k not in BOOL_KEYS | {"dims"}})

    parser = _Parser(prog="qswitch", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("holevo", parents=[common], help="chi for one combination")
    sw = sub.add_parser("sweep", parents=[common], help="chi for every combination of size m")
    sw.add_argument("--plot-data", dest="plot_data", action="store_true")
    t1 = sub.add_parser("table1", parents=[common], help="chi max/min per m for N=3, q=0")
    t1.add_argument("--dims", type=_ints, default=[2, 3])
    cl = sub.add_parser("classify", parents=[common], help="local/global pair classification")
    cl.add_argument("--with-chi", dest="with_chi", action="store_true")
    for p in (sw, t1, cl):
        p.set_defaults(**{k: v for k, v in file_defaults.items() if k in BOOL_KEYS | {"dims"}})
    return parser


def parse_config(argv) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.config:
        ns = build_parser(read_config(ns.config)).parse_args(argv)
    kw = {f.name: getattr(ns, f.name) for f in fields(RunConfig) if hasattr(ns, f.name)}
    kw = {k: v for k, v in kw.items() if v is not None}
    for key, conv in (("N", int), ("d", int), ("tol", float), ("starts", int), ("seed", int)):
        if isinstance(kw.get(key), str):
            kw[key] = conv(kw[key])
    if ns.command == "holevo" and not isinstance(kw.get("orders"), list):
        raise UsageError("holevo needs explicit --orders")
    return RunConfig(**kw)


def run(cfg: RunConfig) -> tuple[str, int]:
    """Execute ``cfg`` and return ``(output text, exit code)``."""
    commands = {"holevo": cmd_holevo, "sweep": cmd_sweep, "table1": cmd_table1, "classify": cmd_classify}
    records = commands[cfg.command](cfg)
    if cfg.command == "table1":
        converged = records[-1]["_converged"]
        return emit(records, cfg.format, kind="table1"), EXIT_OK if converged else EXIT_NONCONVERGED
    if cfg.command == "sweep" and cfg.plot_data:
        text = plot_data(records)
    else:
        text = emit(records, cfg.format)
    converged = all(r.converged for r in records if isinstance(r, ResultRow))
    return text, EXIT_OK if converged else EXIT_NONCONVERGED


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
        text, code = run(cfg)
    except SystemExit as exc:  # argparse usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except UsageError as exc:
        print(f"qswitch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code == EXIT_NONCONVERGED:
        print("qswitch: warning: optimizer did not converge for some rows", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
