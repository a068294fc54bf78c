"""Named experiments: parameter sweeps written as CSV plus a gnuplot script.

Every runner returns a :class:`SweepTable`; nothing touches the filesystem until
:func:`write_outputs`, which is called once per run from a single thread.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import os
from pathlib import Path

import numpy as np

from . import collective, two_qubit
from .errors import ConfigError
from .measures import qubit_state_coherence

TWO_PI = 2.0 * np.pi
WORKERS_ENV = "TC_ENTANGLE_WORKERS"


@dataclass(frozen=True)
class SweepTable:
    columns: tuple
    rows: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        if rows.ndim != 2 or rows.shape[1] != len(self.columns):
            raise ValueError(f"table must have {len(self.columns)} columns, got shape {rows.shape}")
        if not np.all(np.isfinite(rows)):
            raise ValueError("table contains non-finite values")
        object.__setattr__(self, "rows", rows)

    def to_csv(self):
        lines = [",".join(self.columns)]
        lines += [",".join(format(float(v), ".17g") for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"


def worker_count():
    """Worker threads from ``TC_ENTANGLE_WORKERS``; unset means all cores."""
    value = os.environ.get(WORKERS_ENV, "").strip()
    if not value:
        return os.cpu_count() or 1
    try:
        n = int(value)
    except ValueError:
        n = 0
    if n < 1:
        raise ConfigError(WORKERS_ENV, f"must be a positive integer, got {value!r}")
    return n


def _parallel_map(fn, items, workers):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def inclusive_grid(lo, hi, step):
    n = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return lo + np.arange(n) * step


def _theta_values(cfg, prefix, default_step):
    if prefix in cfg.params and f"{prefix}_min" not in cfg.params:
        return np.asarray(cfg.params[prefix], dtype=float)
    return inclusive_grid(cfg.get(f"{prefix}_min", 0.0), cfg.get(f"{prefix}_max", TWO_PI),
                          cfg.get(f"{prefix}_step", default_step))


def _two_qubit_window(cfg):
    default_max = 300.0 if cfg.get("case") == "identical_pair" else 50.0
    return cfg.get("gt_max", default_max), cfg.get("gt_step", 0.01)


def run_two_qubit_series(cfg, workers=1):
    gt_max, gt_step = _two_qubit_window(cfg)
    label = two_qubit.CaseLabel(cfg.get("case"), cfg.get("theta"))
    series = two_qubit.concurrence_series(label, gt_max, gt_step)
    return SweepTable(("gt", "concurrence"), np.column_stack([series.times, series.values]))


def run_two_qubit_surface(cfg, workers=1):
    gt_max, gt_step = _two_qubit_window(cfg)
    thetas = _theta_values(cfg, "theta", 0.01)
    times = two_qubit.time_grid(gt_max, gt_step)

    def one(theta):
        return two_qubit.concurrence_series(two_qubit.CaseLabel(cfg.get("case"), theta),
                                            gt_max, gt_step).values

    values = _parallel_map(one, thetas, workers)
    rows = [np.column_stack([np.full(len(times), th), times, v]) for th, v in zip(thetas, values)]
    return SweepTable(("theta", "gt", "concurrence"), np.vstack(rows))


def run_two_qubit_maxc(cfg, workers=1):
    gt_max, gt_step = _two_qubit_window(cfg)
    thetas = _theta_values(cfg, "theta", 0.01)
    label = cfg.get("case")
    results = _parallel_map(
        lambda th: two_qubit.max_concurrence(two_qubit.CaseLabel(label, th), gt_max, gt_step),
        thetas, workers)
    gt_star = np.array([r[0] for r in results])
    c_max = np.array([r[1] for r in results])
    return SweepTable(("theta", "coherence", "gt_star", "c_max"),
                      np.column_stack([thetas, qubit_state_coherence(thetas), gt_star, c_max]))


def snapshot_time(cfg):
    gt = cfg.get("gt", "peak")
    if gt != "peak":
        return float(gt)
    gt_max, gt_step = _two_qubit_window(cfg)
    label = two_qubit.CaseLabel(cfg.get("case"), cfg.get("theta"))
    return two_qubit.max_concurrence(label, gt_max, gt_step)[0]


def run_snapshot(cfg, workers=1):
    label = two_qubit.CaseLabel(cfg.get("case"), cfg.get("theta"))
    rho = two_qubit.reduced_density_case(label, snapshot_time(cfg))
    r, c = np.divmod(np.arange(16), 4)
    return SweepTable(("row", "col", "re", "im"),
                      np.column_stack([r, c, rho.real.ravel(), rho.imag.ravel()]))


def _multi_window(cfg):
    return cfg.get("gt_max", 50.0), cfg.get("gt_step", 0.05)


def _multi_kwargs(cfg):
    return dict(weight_cutoff=cfg.get("weight_cutoff", collective.DEFAULT_CUTOFF),
                memory_budget=cfg.get("memory_budget", collective.DEFAULT_MEMORY_BUDGET))


def run_multi_moments(cfg, workers=1):
    gt_max, gt_step = _multi_window(cfg)
    times = two_qubit.time_grid(gt_max, gt_step)
    n = cfg.get("n_qubits")
    exp = collective.dicke_coefficients(n, cfg.get("theta_tilde"))
    mom = collective.collective_moments(exp, times, **_multi_kwargs(cfg))
    if n >= 2:
        collective.pairwise_density(mom, n)  # tripwire on the assembled state
    cols = [times, mom.jz_over_n, mom.jz2_over_n2]
    for z in (mom.jp_over_n, mom.jpjz_anticomm, mom.jp2_over_n2):
        cols += [np.real(z), np.imag(z)]
    return SweepTable(("gt", "jz_over_n", "jz2_over_n2", "re_jp", "im_jp", "re_jpjz", "im_jpjz",
                       "re_jp2", "im_jp2"), np.column_stack(cols))


def multi_maxc_curve(n_qubits, thetas, gt_max=50.0, gt_step=0.05, workers=1, **kwargs):
    """``(t_star, c_max)`` for one ``N`` over ``thetas``.

    The grid is split into contiguous blocks, one per worker; every block is a
    full sector sweep, and per-angle results do not depend on the split.
    """
    thetas = np.asarray(thetas, dtype=float)
    blocks = [b for b in np.array_split(thetas, max(1, min(workers, len(thetas)))) if len(b)]
    parts = _parallel_map(
        lambda b: collective.scan_pairwise_max_concurrence(n_qubits, b, gt_max, gt_step, **kwargs),
        blocks, workers)
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def run_multi_maxc(cfg, workers=1):
    gt_max, gt_step = _multi_window(cfg)
    thetas = _theta_values(cfg, "theta_tilde", 0.05)
    rows = []
    for n in cfg.get("n_qubits"):
        if n < 2:
            raise ConfigError("n_qubits", "pairwise entanglement needs at least 2 qubits")
        t_star, c_max = multi_maxc_curve(n, thetas, gt_max, gt_step, workers, **_multi_kwargs(cfg))
        rows.append(np.column_stack([np.full(len(thetas), n), thetas, t_star, c_max]))
    return SweepTable(("n_qubits", "theta_tilde", "t_star", "c_max"), np.vstack(rows))


def _gp_lines(name):
    csv = f"{name}.csv"
    head = ["set datafile separator ','", "set key autotitle columnhead",
            "set terminal pngcairo size 900,600", f"set output '{name}.png'"]
    if name == "two-qubit-series":
        body = ["set xlabel 'gt'", "set ylabel 'concurrence'",
                f"plot '{csv}' using 1:2 with lines"]
    elif name == "two-qubit-surface":
        body = ["set xlabel 'theta'", "set ylabel 'gt'", "set zlabel 'concurrence'",
                "set pm3d map", f"splot '{csv}' using 1:2:3 with pm3d"]
    elif name == "two-qubit-maxc":
        body = ["set xlabel 'theta'", "set ylabel 'max concurrence'",
                "set x2label 'coherence'", "set x2tics",
                f"plot '{csv}' using 1:4 with lines, '' using 2:4 axes x2y1 with points pt 7 ps 0.3"]
    elif name == "snapshot":
        body = ["set xlabel 'col'", "set ylabel 'row'", "set zlabel 'Re rho'",
                "set style fill solid", "set xyplane 0",
                f"splot '{csv}' using 2:1:3 with impulses lw 20"]
    elif name == "multi-moments":
        body = ["set xlabel 'gt'",
                f"plot '{csv}' using 1:2 with lines, '' using 1:3 with lines"]
    else:
        body = ["set xlabel 'theta tilde'", "set ylabel 'max concurrence'",
                f"plot '{csv}' using 2:4:1 with lines lc variable title 'c_max by N'"]
    return head + body


def gnuplot_script(name, table):
    return "\n".join(_gp_lines(name)) + "\n"


REGISTRY = {
    "two-qubit-series": ("concurrence versus gt for one case family and angle", run_two_qubit_series),
    "two-qubit-surface": ("concurrence over a (theta, gt) grid", run_two_qubit_surface),
    "two-qubit-maxc": ("maximal concurrence and its time for each theta", run_two_qubit_maxc),
    "snapshot": ("4x4 reduced density matrix at a fixed or peak time", run_snapshot),
    "multi-moments": ("collective moments of N qubits versus gt", run_multi_moments),
    "multi-maxc": ("maximal pairwise concurrence versus theta tilde for several N", run_multi_maxc),
}


def run_experiment(cfg, workers=None):
    """Compute the experiment's table (no files written)."""
    workers = worker_count() if workers is None else workers
    return REGISTRY[cfg.experiment][1](cfg, workers)


def write_outputs(cfg, table):
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{cfg.experiment}.csv"
    gp_path = out / f"{cfg.experiment}.gp"
    csv_path.write_text(table.to_csv())
    gp_path.write_text(gnuplot_script(cfg.experiment, table))
    return [csv_path, gp_path]
