"""Monte Carlo bias/variance study over innovation correlation and bandwidth.

Each replication simulates one pair per correlation value, smooths its
cross-periodogram once and evaluates every estimator at every bandwidth of
the grid from that single spectrum.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

from .arfima import DEFAULT_BURN_IN, ArfimaSpec, McArfimaSpec, simulate_correlated_arfima, simulate_mc_arfima
from .errors import ConfigurationError, EmptySampleError, InsufficientPointsError, XSpectraError
from .estimators import APE_PARTS, ESTIMATORS, EstimatorConfig, estimate_from_spectrum
from .spectral import smoothed_cross_periodogram

log = logging.getLogger(__name__)

THREADS_ENV = "XSPECTRA_THREADS"
CSV_HEADER = ("model", "rho", "m_over_T", "estimator", "mean", "variance", "bias", "failed", "reps")

DEFAULT_RHOS = (0.2, 0.4, 0.6, 0.8, 1.0)
DEFAULT_M_FRACS = tuple(round(0.05 * k, 2) for k in range(1, 11))

_MASK64 = (1 << 64) - 1


class Model(str, Enum):
    CORRELATED_ARFIMA = "arfima"
    MC_ARFIMA = "mc-arfima"


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix_seed(base_seed: int, index: int) -> int:
    """Per-replication 64-bit seed; depends only on ``(base_seed, index)``."""
    return _splitmix64(_splitmix64(int(base_seed) & _MASK64) ^ (int(index) & _MASK64))


@dataclass(frozen=True)
class StudyGrid:
    model: Model = Model.CORRELATED_ARFIMA
    rho_values: tuple = DEFAULT_RHOS
    m_over_T_values: tuple = DEFAULT_M_FRACS
    T: int = 5000
    replications: int = 1000
    smoothing_span: int = 21
    base_seed: int = 0
    d1: Optional[float] = None
    d2: Optional[float] = None
    d3: Optional[float] = None
    d4: Optional[float] = None
    burn_in: int = DEFAULT_BURN_IN
    q: float = 0.5
    ape_part: str = "modulus"

    def __post_init__(self):
        model = Model(self.model)
        object.__setattr__(self, "model", model)
        defaults = (0.4, 0.4, None, None) if model is Model.CORRELATED_ARFIMA else (0.4, 0.2, 0.2, 0.4)
        for name, default in zip(("d1", "d2", "d3", "d4"), defaults):
            if getattr(self, name) is None:
                object.__setattr__(self, name, default)
        object.__setattr__(self, "rho_values", tuple(float(r) for r in self.rho_values))
        object.__setattr__(self, "m_over_T_values", tuple(float(f) for f in self.m_over_T_values))
        if not self.rho_values or not self.m_over_T_values:
            raise ConfigurationError("rho and m/T grids must be nonempty")
        for r in self.rho_values:
            if not -1.0 <= r <= 1.0:
                raise ConfigurationError(f"rho {r} outside [-1, 1]")
        for f in self.m_over_T_values:
            if not 0.0 < f <= 0.5:
                raise ConfigurationError(f"m/T value {f} outside (0, 0.5]")
        if self.replications < 1:
            raise ConfigurationError("replications must be at least 1")
        if self.ape_part not in APE_PARTS:
            raise ConfigurationError(f"ape_part must be one of {APE_PARTS}")
        try:
            self.pair_spec(self.rho_values[0])
        except XSpectraError as exc:
            raise ConfigurationError(str(exc)) from exc
        for f in self.m_over_T_values:
            m = self.m_for(f)
            if m < 3:
                raise ConfigurationError(f"m/T={f} gives m={m}; XPE needs at least 3 frequencies")
        if self.smoothing_span and self.smoothing_span > self.T // 2:
            raise ConfigurationError("smoothing span exceeds the number of Fourier frequencies")

    def m_for(self, m_over_T: float) -> int:
        return min(max(2, int(math.floor(m_over_T * self.T + 1e-9))), self.T // 2)

    def pair_spec(self, rho: float):
        if self.model is Model.CORRELATED_ARFIMA:
            return ArfimaSpec(self.d1, self.d2, rho, self.T, self.burn_in)
        return McArfimaSpec.study_family(rho, self.T, self.burn_in, self.d1, self.d2, self.d3, self.d4)

    def estimator_config(self) -> EstimatorConfig:
        return EstimatorConfig(m=self.m_for(self.m_over_T_values[0]), q=self.q,
                               ape_part=self.ape_part, smoothing_span=self.smoothing_span)


def true_h_xy(grid: StudyGrid) -> float:
    """Theoretical bivariate Hurst exponent of the grid's model family."""
    if grid.model is Model.CORRELATED_ARFIMA:
        return 0.5 + (grid.d1 + grid.d2) / 2.0
    return 0.5 + (grid.d2 + grid.d3) / 2.0


def simulate_pair(grid: StudyGrid, rho: float, seed):
    spec = grid.pair_spec(rho)
    if grid.model is Model.CORRELATED_ARFIMA:
        return simulate_correlated_arfima(spec, seed)
    return simulate_mc_arfima(spec, seed)


@dataclass(frozen=True)
class SummaryRow:
    model: str
    rho: float
    m_over_T: float
    estimator: str
    mean: float
    variance: float
    bias: float
    failed: int
    reps: int

    def csv_fields(self) -> list[str]:
        return [self.model, _fmt(self.rho), _fmt(self.m_over_T), self.estimator,
                _fmt(self.mean), _fmt(self.variance), _fmt(self.bias),
                str(self.failed), str(self.reps)]


def _fmt(v: float) -> str:
    return "NA" if v is None or math.isnan(v) else f"{v:.10g}"


def _parse(v: str) -> float:
    return math.nan if v == "NA" else float(v)


@dataclass
class StudySummary:
    rows: list[SummaryRow]
    true_h: float
    T: Optional[int] = None

    def select(self, estimator: Optional[str] = None, rho: Optional[float] = None,
               m_over_T: Optional[float] = None) -> list[SummaryRow]:
        out = self.rows
        if estimator is not None:
            out = [r for r in out if r.estimator == estimator.upper()]
        if rho is not None:
            out = [r for r in out if math.isclose(r.rho, rho, abs_tol=1e-12)]
        if m_over_T is not None:
            out = [r for r in out if math.isclose(r.m_over_T, m_over_T, abs_tol=1e-12)]
        return out

    def cell(self, estimator: str, rho: float, m_over_T: float) -> SummaryRow:
        rows = self.select(estimator, rho, m_over_T)
        if len(rows) != 1:
            raise KeyError((estimator, rho, m_over_T))
        return rows[0]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in self.rows:
            w.writerow(row.csv_fields())
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, true_h: float, T: Optional[int] = None) -> "StudySummary":
        reader = csv.DictReader(io.StringIO(text))
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"unexpected summary header {reader.fieldnames}")
        rows = [
            SummaryRow(r["model"], float(r["rho"]), float(r["m_over_T"]), r["estimator"],
                       _parse(r["mean"]), _parse(r["variance"]), _parse(r["bias"]),
                       int(r["failed"]), int(r["reps"]))
            for r in reader
        ]
        return cls(rows, true_h, T)


def summarize(estimates: Sequence[float], true_h: float) -> tuple[float, float, float]:
    """Sample mean, unbiased sample variance and bias ``mean - true_h``."""
    v = np.asarray(estimates, dtype=float)
    if v.size == 0:
        raise EmptySampleError("cannot summarize an empty sample")
    mean = float(v.mean())
    var = float(v.var(ddof=1)) if v.size > 1 else 0.0
    return mean, var, mean - true_h


def _replication(grid: StudyGrid, r: int) -> np.ndarray:
    """Estimates for one replication, shape ``(n_rho, n_m, n_est)``; NaN marks a failure."""
    seed = mix_seed(grid.base_seed, r)
    config = grid.estimator_config()
    ms = [grid.m_for(f) for f in grid.m_over_T_values]
    out = np.full((len(grid.rho_values), len(ms), len(ESTIMATORS)), np.nan)
    for i, rho in enumerate(grid.rho_values):
        # same seed for every rho: common random numbers across the rho grid
        x, y = simulate_pair(grid, rho, np.random.default_rng(seed))
        spectrum = smoothed_cross_periodogram(x, y, grid.smoothing_span)
        for k, m in enumerate(ms):
            for e, name in enumerate(ESTIMATORS):
                try:
                    out[i, k, e] = estimate_from_spectrum(name, spectrum, m, config).h_xy
                except XSpectraError as exc:
                    log.debug("replication %d rho=%g m=%d %s failed: %s", r, rho, m, name, exc)
    return out


def _replication_batch(args) -> list[tuple[int, np.ndarray]]:
    grid, indices = args
    return [(r, _replication(grid, r)) for r in indices]


def resolve_workers(workers: Optional[int] = None) -> int:
    if workers is None:
        raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
        try:
            workers = int(raw)
        except ValueError as exc:
            raise ConfigurationError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    if workers < 0:
        raise ConfigurationError("worker count must be nonnegative")
    if workers == 0:
        workers = os.cpu_count() or 1
    return workers


def run_study(grid: StudyGrid, workers: Optional[int] = None) -> StudySummary:
    """Run every replication of ``grid`` and reduce to per-cell moments.

    ``workers`` (default: ``$XSPECTRA_THREADS``, 0 meaning all cores) only
    changes the wall-clock time; results are identical for any value.
    """
    if not isinstance(grid, StudyGrid):
        raise ConfigurationError("run_study expects a StudyGrid")
    workers = min(resolve_workers(workers), grid.replications)
    R = grid.replications
    results = np.full((R, len(grid.rho_values), len(grid.m_over_T_values), len(ESTIMATORS)), np.nan)
    if workers <= 1:
        for r in range(R):
            results[r] = _replication(grid, r)
    else:
        chunks = [(grid, list(range(start, R, workers))) for start in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for batch in pool.map(_replication_batch, chunks):
                for r, est in batch:
                    results[r] = est
    return _reduce(grid, results)


def _reduce(grid: StudyGrid, results: np.ndarray) -> StudySummary:
    true_h = true_h_xy(grid)
    rows = []
    for i, rho in enumerate(grid.rho_values):
        for k, frac in enumerate(grid.m_over_T_values):
            for e, name in enumerate(ESTIMATORS):
                vals = results[:, i, k, e]
                ok = vals[~np.isnan(vals)]
                failed = int(vals.size - ok.size)
                if ok.size:
                    mean, var, bias = summarize(ok, true_h)
                else:
                    mean = var = bias = math.nan
                rows.append(SummaryRow(grid.model.value, rho, frac, name, mean, var, bias,
                                       failed, int(ok.size)))
    return StudySummary(rows, true_h, grid.T)


def variance_scaling_exponent(summary: StudySummary, estimator: str, rho: float) -> float:
    """Least-squares slope of log(variance) against log(m) for one estimator and rho."""
    rows = [r for r in summary.select(estimator, rho) if r.variance > 0]
    if len(rows) < 3:
        raise InsufficientPointsError(
            f"need variances at 3 or more bandwidths, have {len(rows)}"
        )
    # m = (m/T) * T, so the slope against log(m/T) equals the slope against log(m)
    frac = np.array([r.m_over_T for r in rows])
    slope, _ = np.polyfit(np.log(frac), np.log([r.variance for r in rows]), 1)
    return float(slope)
