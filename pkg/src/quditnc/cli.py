"""Command-line front end: state inspection, witness sweeps, Table 1, phase-space exports."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import phase_space, witnesses
from .errors import ConvergenceError, DomainError
from .fock import prepare

EXIT_OK, EXIT_DOMAIN, EXIT_CONVERGENCE, EXIT_IO = 0, 2, 3, 4
WORKERS_ENV = "QUDITNC_WORKERS"

TABLE1_PARAMS = dict(M=10, p=0.8, q=-0.01)
TABLE1_PAPER = {
    ("add", 1): 0.255922, ("add", 3): 0.31384, ("add", 5): 0.363856,
    ("sub", 1): 0.260153, ("sub", 3): 0.353625, ("sub", 5): 0.482082,
}


def parse_sweep(spec: str) -> list[float]:
    """``start:stop:step`` (stop included when hit within 1e-9 steps) or a single number."""
    parts = spec.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise DomainError(f"sweep spec must be start:stop:step, got {spec!r}")
    start, stop, step = map(float, parts)
    if step <= 0:
        raise DomainError(f"sweep step must be > 0, got {step}")
    if stop < start:
        raise DomainError(f"sweep stop {stop} below start {start}")
    span = (stop - start) / step
    count = int(math.floor(span + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


@dataclass(frozen=True)
class RunConfig:
    M: int
    p: float
    q: float
    add_r: int = 0
    sub_t: int = 0

    def __post_init__(self):
        if self.add_r < 0 or self.sub_t < 0:
            raise DomainError("photon counts must be >= 0")
        if self.add_r and self.sub_t:
            raise DomainError("--add and --sub cannot both be nonzero")

    def state(self):
        return prepare(self.M, self.p, self.q, add=self.add_r, sub=self.sub_t)


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _pool_map(fn, items, workers: int):
    # results come back in submission order whatever the completion order
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render_rows(columns: list[str], rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{c: row[c] for c in columns} for row in rows], indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _witness_point(args):
    kind, l, convention, cfg = args
    result = witnesses.evaluate(kind, cfg.state(), l, convention)
    return {"p": cfg.p, "value": result.value, "nonclassical": result.nonclassical}


def cmd_state(ns) -> int:
    cfg = RunConfig(ns.M, ns.p, ns.q, ns.add, ns.sub)
    emit(json.dumps(cfg.state().to_record()) + "\n", ns.out)
    return EXIT_OK


def cmd_witness(ns) -> int:
    ps = parse_sweep(ns.p)
    configs = [RunConfig(ns.M, p, ns.q, ns.add, ns.sub) for p in ps]
    for cfg in configs:
        cfg.state()  # fail fast on an invalid sweep point
    jobs = [(ns.kind, ns.l, ns.convention, cfg) for cfg in configs]
    rows = _pool_map(_witness_point, jobs, ns.workers)
    emit(render_rows(["p", "value", "nonclassical"], rows, ns.format), ns.out)
    return EXIT_OK


def _table1_row(args):
    op, count, tolerance = args
    kw = {op: count}
    state = prepare(**TABLE1_PARAMS, **kw)
    rep = phase_space.nonclassical_volume(state, tolerance)
    paper = TABLE1_PAPER[(op, count)]
    return {
        "operation": op, "count": count, "paper": paper, "computed": rep.value,
        "abs_diff": abs(rep.value - paper), "error_estimate": rep.error_estimate,
        "converged": rep.converged,
    }


def table1(tolerance: float = 1e-5, workers: int = 1) -> list[dict]:
    jobs = [(op, n, tolerance) for op in ("add", "sub") for n in (1, 3, 5)]
    rows = _pool_map(_table1_row, jobs, workers)
    by_key = {(r["operation"], r["count"]): r for r in rows}
    for r in rows:
        r["sub_exceeds_add"] = by_key[("sub", r["count"])]["computed"] > by_key[("add", r["count"])]["computed"]
    return rows


TABLE1_COLUMNS = ["operation", "count", "paper", "computed", "abs_diff",
                  "error_estimate", "converged", "sub_exceeds_add"]


def cmd_table1(ns) -> int:
    rows = table1(ns.tolerance, ns.workers)
    emit(render_rows(TABLE1_COLUMNS, rows, ns.format), ns.out)
    if not all(r["converged"] for r in rows):
        print("quadrature did not converge for some rows", file=sys.stderr)
        return EXIT_CONVERGENCE
    return EXIT_OK


def cmd_wigner(ns) -> int:
    state = RunConfig(ns.M, ns.p, ns.q, ns.add, ns.sub).state()
    grid = phase_space.PhaseSpaceGrid.square(ns.extent, ns.grid)
    xs, ps = grid.axes()
    values = phase_space.wigner_grid(state, grid)
    phase_space.write_wigner_csv(ns.out, xs, ps, values)
    print(f"min {float(values.min())!r}")
    print(f"negative_nodes {int(np.count_nonzero(values < 0))}")
    return EXIT_OK


def cmd_tomogram(ns) -> int:
    state = RunConfig(ns.M, ns.p, ns.q, ns.add, ns.sub).state()
    Xs = np.array(parse_sweep(ns.X))
    thetas = np.array(parse_sweep(ns.theta))
    values = phase_space.tomogram(state, Xs[:, None], thetas[None, :])
    phase_space.write_tomogram_csv(ns.out, Xs, thetas, values)
    print(f"min {float(values.min())!r}")
    print(f"negative_nodes {int(np.count_nonzero(values < 0))}")
    return EXIT_OK


def cmd_volume(ns) -> int:
    state = RunConfig(ns.M, ns.p, ns.q, ns.add, ns.sub).state()
    rep = phase_space.nonclassical_volume(state, ns.tolerance)
    emit(json.dumps(rep.__dict__) + "\n", ns.out)
    return EXIT_OK if rep.converged else EXIT_CONVERGENCE


def _state_args(parser, M_default=None, p_default=None):
    parser.add_argument("--M", type=int, required=M_default is None, default=M_default)
    parser.add_argument("--q", type=float, default=0.0)
    parser.add_argument("--add", type=int, default=0, metavar="R", help="photons added")
    parser.add_argument("--sub", type=int, default=0, metavar="T", help="photons subtracted")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quditnc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("state", help="print the prepared state as a JSON record")
    _state_args(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("witness", help="sweep a witness over p")
    p.add_argument("kind", choices=["hoa", "hos", "hosps"])
    _state_args(p)
    p.add_argument("--p", default="0.05:0.95:0.01", help="start:stop:step or a single value")
    p.add_argument("--l", type=int, default=None, help="order (defaults: hoa 3, hos 2, hosps 4)")
    p.add_argument("--convention", choices=["definition", "literal"], default="definition")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("table1", help="nonclassical volumes at M=10, p=0.8, q=-0.01")
    p.add_argument("--tolerance", type=float, default=1e-5)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("wigner", help="export W on a square grid")
    _state_args(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--grid", type=int, default=201, help="samples per axis")
    p.add_argument("--extent", type=float, default=6.0, help="grid half-width")
    p.add_argument("--out", default="wigner.csv")
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("tomogram", help="export w(X, theta)")
    _state_args(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--X", default="-5:5:0.1")
    p.add_argument("--theta", default="0:3.1416:0.1963")
    p.add_argument("--out", default="tomogram.csv")
    p.set_defaults(func=cmd_tomogram)

    p = sub.add_parser("volume", help="nonclassical volume of one state")
    _state_args(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.add_argument("--out")
    p.set_defaults(func=cmd_volume)
    return parser


_SWEEP_FLAGS = {"--p", "--X", "--theta"}


def _join_negative_sweeps(argv: list[str]) -> list[str]:
    # argparse takes "-5:5:0.1" for an option; bind it to its flag explicitly
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _SWEEP_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    ns = build_parser().parse_args(_join_negative_sweeps(argv))
    if getattr(ns, "workers", 1) is None:
        ns.workers = default_workers()
    try:
        return ns.func(ns)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"not converged: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
