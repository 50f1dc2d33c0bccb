"""
K sweeps: OTOC decay rates next to Perron-Frobenius resonances and regular areas.

Each K is an independent task. Its row is a pure function of the config and
the K index, so output does not depend on ``parallelism``.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__, classical, pf, quantum
from .cache import SeriesCache, series_key
from .config import SweepConfig
from .errors import NoResonanceError, NoWindowError, NumericFailure, OtocLabError
from .fitting import detect_exponential_window, fit_exponential

log = logging.getLogger(__name__)

CSV_VERSION = 1
CSV_COLUMNS = (
    "K", "status", "gamma", "gamma_stderr", "window_start", "window_end", "r_squared",
    "exp_of_neg_half_gamma", "lambda1_fourier", "lambda1_momentum_position",
    "lambda1_ulam", "a_reg", "seed",
)


@dataclass
class SweepRecord:
    """One K row. ``lambda1_*`` hold moduli ``|lambda_1|``."""

    K: float
    status: str = "ok"
    gamma: Optional[float] = None
    gamma_stderr: Optional[float] = None
    window: Optional[tuple] = None
    r_squared: Optional[float] = None
    lambda1_fourier: Optional[float] = None
    lambda1_momentum_position: Optional[float] = None
    lambda1_ulam: Optional[float] = None
    a_reg: Optional[float] = None
    seed: int = 0
    provenance: dict = field(default_factory=dict)
    computed_series: bool = False

    @property
    def exp_of_neg_half_gamma(self):
        return None if self.gamma is None else math.exp(-self.gamma / 2)

    def row(self):
        def fmt(x):
            return "" if x is None else repr(float(x))
        w = self.window or (None, None)
        return [repr(float(self.K)), self.status, fmt(self.gamma), fmt(self.gamma_stderr),
                "" if w[0] is None else str(w[0]), "" if w[1] is None else str(w[1]),
                fmt(self.r_squared), fmt(self.exp_of_neg_half_gamma),
                fmt(self.lambda1_fourier), fmt(self.lambda1_momentum_position),
                fmt(self.lambda1_ulam), fmt(self.a_reg), str(self.seed)]


def derive_seed(seed, index):
    return int(np.random.SeedSequence([int(seed), int(index)]).generate_state(1)[0])


def _fail(rec, stage, exc):
    msg = f"{stage}: {type(exc).__name__}"
    rec.status = msg if rec.status == "ok" else f"{rec.status}; {msg}"
    log.warning("K=%s %s: %s", rec.K, stage, exc)


def run_one(cfg: SweepConfig, index: int) -> SweepRecord:
    """Compute the row for ``cfg.k_values[index]``."""
    K = float(cfg.k_values[index])
    seed = derive_seed(cfg.seed, index)
    rec = SweepRecord(K=K, seed=seed)
    prov = rec.provenance

    q = cfg.quantum
    if q.enabled:
        key = series_key(K, q.D, q.t_max, q.grid, q.evolve, q.resymmetrize)
        cache = SeriesCache(cfg.cache_dir)
        series = cache.load(key)
        if series is None:
            series = quantum.compute_correlators(quantum.MapParams(K, q.D), q.t_max, grid=q.grid,
                                                 evolve=q.evolve, resymmetrize=q.resymmetrize,
                                                 d_cap=q.d_cap)
            cache.store(key, series)
            rec.computed_series = True
        prov["quantum"] = {"D": q.D, "t_max": q.t_max, "grid": q.grid, "evolve": q.evolve}
        try:
            window = detect_exponential_window(series, cfg.fit)
            fit = fit_exponential(series, window)
            rec.gamma, rec.gamma_stderr = fit.exponent, fit.stderr_exponent
            rec.window, rec.r_squared = fit.window, fit.r_squared
        except (NoWindowError, OtocLabError) as exc:
            _fail(rec, "fit", exc)

    f = cfg.pf.fourier
    if f.enabled:
        k_max = pf.fourier_cutoff(f.truncation)
        prov["fourier"] = {"truncation": f.truncation, "k_max": k_max,
                           "dim": (2 * k_max + 1) ** 2, "sigma": f.sigma}
        try:
            op = pf.build_fourier(K, k_max, f.sigma)
            rec.lambda1_fourier = abs(pf.resonance(op, cfg.unit_tol))
        except (NoResonanceError, NumericFailure) as exc:
            _fail(rec, "fourier", exc)

    mp = cfg.pf.momentum_position
    if mp.enabled:
        prov["momentum_position"] = {"N": mp.N, "dim": mp.N**2, "s": mp.s}
        try:
            op = pf.build_momentum_position(K, mp.N, mp.s)
            rec.lambda1_momentum_position = abs(pf.resonance(op, cfg.unit_tol))
        except (NoResonanceError, NumericFailure, OtocLabError) as exc:
            _fail(rec, "momentum_position", exc)

    u = cfg.pf.ulam
    if u.enabled:
        noise = u.noise_std()
        prov["ulam"] = {"M": u.M, "n_per_cell": u.n_per_cell, "noise_std": noise, "seed": seed}
        try:
            op = pf.build_ulam(K, u.M, u.n_per_cell, noise, seed=seed)
            rec.lambda1_ulam = abs(pf.resonance(op, cfg.unit_tol))
        except (NoResonanceError, NumericFailure) as exc:
            _fail(rec, "ulam", exc)

    a = cfg.area
    if a.enabled:
        est = classical.estimate_regular_area(K, a.n_total, a.steps, classical.Hole(*a.hole), seed)
        rec.a_reg = est.area
        prov["area"] = {"n_total": a.n_total, "steps": a.steps, "hole": list(a.hole),
                        "n_remaining": est.n_remaining, "seed": seed}
    return rec


def _run_indexed(args):
    cfg, i = args
    return run_one(cfg, i)


def write_csv(records, path):
    path = Path(path)
    with open(path, "w", newline="") as fh:
        fh.write(f"# otoclab sweep csv v{CSV_VERSION}: {','.join(CSV_COLUMNS)}\n")
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow(r.row())


def read_csv(path):
    """Load sweep rows back as SweepRecords (provenance is not stored in the CSV)."""
    def num(x, cast=float):
        return None if x == "" else cast(x)
    out = []
    with open(path, newline="") as fh:
        rows = [line for line in fh if not line.startswith("#")]
    for r in csv.DictReader(rows):
        ws, we = num(r["window_start"], int), num(r["window_end"], int)
        out.append(SweepRecord(
            K=float(r["K"]), status=r["status"], gamma=num(r["gamma"]),
            gamma_stderr=num(r["gamma_stderr"]),
            window=None if ws is None else (ws, we), r_squared=num(r["r_squared"]),
            lambda1_fourier=num(r["lambda1_fourier"]),
            lambda1_momentum_position=num(r["lambda1_momentum_position"]),
            lambda1_ulam=num(r["lambda1_ulam"]), a_reg=num(r["a_reg"]), seed=int(r["seed"]),
        ))
    return out


def run_sweep(cfg: SweepConfig, write=True):
    """
    Run every K in ``cfg.k_values`` and persist ``sweep.csv`` plus ``manifest.json``.

    Per-K failures are recorded in the row's ``status``; they never abort the sweep.
    """
    cfg.validate()
    jobs = [(cfg, i) for i in range(len(cfg.k_values))]
    if cfg.parallelism > 1:
        with ProcessPoolExecutor(max_workers=cfg.parallelism) as pool:
            records = list(pool.map(_run_indexed, jobs))
    else:
        records = [_run_indexed(j) for j in jobs]

    if write:
        from .config import to_dict

        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(records, out / "sweep.csv")
        manifest = {
            "otoclab_version": __version__,
            "csv_version": CSV_VERSION,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "config": to_dict(cfg),
            "n_quantum_evolutions": sum(r.computed_series for r in records),
            "n_failed_rows": sum(r.status != "ok" for r in records),
            "rows": [dict(asdict(r), exp_of_neg_half_gamma=r.exp_of_neg_half_gamma)
                     for r in records],
        }
        with open(out / "manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True, default=list)
    return records


def local_maxima(values):
    """
    Indices of interior local maxima.

    A plateau of equal values counts once, at its first index, when both
    neighbours of the plateau are lower. Endpoints are never maxima.
    """
    v = np.asarray(values, dtype=float)
    out = []
    i = 1
    while i < len(v) - 1:
        j = i
        while j + 1 < len(v) and v[j + 1] == v[i]:
            j += 1
        if j < len(v) - 1 and v[i - 1] < v[i] > v[j + 1]:
            out.append(i)
        i = j + 1
    return out


def bump_colocation(K, area, lam, threshold=0.005, radius=0.5):
    """
    Pair every area maximum above ``threshold`` with the nearest resonance maximum.

    Returns a list of ``(K_area_peak, K_nearest_lambda_peak or None, ok)``.
    """
    K = np.asarray(K, dtype=float)
    area = np.asarray(area, dtype=float)
    lam_peaks = K[local_maxima(lam)]
    rows = []
    for i in local_maxima(area):
        if area[i] <= threshold:
            continue
        if lam_peaks.size == 0:
            rows.append((float(K[i]), None, False))
            continue
        near = lam_peaks[np.argmin(np.abs(lam_peaks - K[i]))]
        rows.append((float(K[i]), float(near), bool(abs(near - K[i]) <= radius + 1e-9)))
    return rows
