"""Monte Carlo MSE sweeps and cross-code comparisons.

Reproducibility contract: a sweep is fully determined by its config.  Trials
are processed in fixed-size chunks; chunk c of SNR point p draws from a
stream seeded by the tuple (seed, p, c), and per-chunk partial sums are
reduced in chunk order.  Worker threads only compute chunks, never reduce,
so results are bit-identical for any worker count.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import codes
from .channel import COMPLEX, REAL, NoiseModel, analytic_mse
from .metrics import encoding_power_gain, min_distance_ratio
from .validation import check_count, check_seed

__all__ = [
    "SOURCE_UNIFORM_PM1",
    "SOURCE_COMPLEX_GAUSSIAN",
    "SimConfig",
    "SimPoint",
    "SimResult",
    "ComparisonRow",
    "ComparisonTable",
    "sigma2_for_snr",
    "monte_carlo_mse",
    "run_sweep",
    "compare_codes",
    "emit_csv",
    "emit_json",
    "read_csv",
]

SOURCE_UNIFORM_PM1 = "uniform_pm1"
SOURCE_COMPLEX_GAUSSIAN = "complex_gaussian"

#: Mean squared magnitude of one source symbol, per source kind.
SOURCE_POWER = {SOURCE_UNIFORM_PM1: 1.0 / 3.0, SOURCE_COMPLEX_GAUSSIAN: 1.0}

#: Noise field matching each source kind (real sources ride a real channel).
SOURCE_FIELD = {SOURCE_UNIFORM_PM1: REAL, SOURCE_COMPLEX_GAUSSIAN: COMPLEX}

MIN_TRIALS = 100
CHUNK = 2048

CSV_COLUMNS = ("snr_db", "sigma2", "code_id", "mc_mse", "ci95", "analytic_mse", "log2_mse")


def _canonical_source(source) -> str:
    key = str(source).replace("_", "").replace("-", "").lower()
    for name in (SOURCE_UNIFORM_PM1, SOURCE_COMPLEX_GAUSSIAN):
        if key == name.replace("_", ""):
            return name
    raise ValueError(
        f"source must be {SOURCE_UNIFORM_PM1!r} or {SOURCE_COMPLEX_GAUSSIAN!r}, got {source!r}"
    )


@dataclass(frozen=True)
class SimConfig:
    """One code, one SNR grid, one seeded Monte Carlo budget."""

    code: dict
    snr_db_points: tuple
    trials_per_point: int
    source: str = SOURCE_UNIFORM_PM1
    seed: int = 0

    def __post_init__(self):
        codes.from_descriptor(self.code)
        points = tuple(float(x) for x in self.snr_db_points)
        if not points:
            raise ValueError("snr_db_points must be nonempty")
        if not all(math.isfinite(x) for x in points):
            raise ValueError(f"snr_db_points must be finite, got {points}")
        object.__setattr__(self, "snr_db_points", points)
        trials = int(self.trials_per_point)
        if trials < MIN_TRIALS:
            raise ValueError(f"trials_per_point must be >= {MIN_TRIALS}, got {trials}")
        object.__setattr__(self, "trials_per_point", trials)
        object.__setattr__(self, "source", _canonical_source(self.source))
        object.__setattr__(self, "seed", check_seed(self.seed))

    def to_dict(self) -> dict:
        return {
            "code": dict(self.code),
            "snr_db_points": list(self.snr_db_points),
            "trials_per_point": self.trials_per_point,
            "source": self.source,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SimConfig":
        if not isinstance(d, dict):
            raise ValueError(f"config must be a JSON object, got {type(d).__name__}")
        d = dict(d)
        try:
            kwargs = {
                "code": d.pop("code"),
                "snr_db_points": d.pop("snr_db_points"),
                "trials_per_point": d.pop("trials_per_point"),
            }
        except KeyError as exc:
            raise ValueError(f"config is missing required field {exc.args[0]!r}") from None
        if "source" in d:
            kwargs["source"] = d.pop("source")
        if "seed" in d:
            kwargs["seed"] = d.pop("seed")
        if d:
            raise ValueError(f"unexpected config field(s): {sorted(d)}")
        return cls(**kwargs)


@dataclass(frozen=True)
class SimPoint:
    """Per-symbol results at one SNR point."""

    snr_db: float
    sigma2: float
    mc_mse: float
    ci95: float
    analytic_mse: float
    log2_mse: float

    def to_dict(self) -> dict:
        return {
            "snr_db": self.snr_db,
            "sigma2": self.sigma2,
            "mc_mse": self.mc_mse,
            "ci95": self.ci95,
            "analytic_mse": self.analytic_mse,
            "log2_mse": self.log2_mse,
        }


@dataclass(frozen=True)
class SimResult:
    code_id: str
    points: tuple

    def to_dict(self) -> dict:
        return {"code_id": self.code_id, "points": [p.to_dict() for p in self.points]}


def _fitted(code):
    if hasattr(code, "generator_"):
        return code
    if isinstance(code, dict):
        return codes.from_descriptor(code).fit()
    return codes.CustomCode(matrix=code).fit()


def sigma2_for_snr(code, snr_db: float, source: str) -> float:
    """Noise variance giving the requested E_s/N_0.

    E_s is the average energy per transmitted symbol: gain * E|u_i|^2 * k/n,
    since the k-symbol source power spreads over n codeword symbols.
    """
    code = _fitted(code)
    source = _canonical_source(source)
    gamma = encoding_power_gain(code.generator_)
    es = gamma * SOURCE_POWER[source] * code.k_ / code.n_
    return es / (10.0 ** (float(snr_db) / 10.0))


def _draw_source(rng: np.random.Generator, m: int, k: int, source: str) -> np.ndarray:
    if source == SOURCE_UNIFORM_PM1:
        return rng.uniform(-1.0, 1.0, (m, k)).astype(np.complex128)
    return (rng.standard_normal((m, k)) + 1j * rng.standard_normal((m, k))) / math.sqrt(2.0)


def monte_carlo_mse(
    code,
    sigma2: float,
    trials: int,
    seed: int = 0,
    source: str = SOURCE_UNIFORM_PM1,
    point_index: int = 0,
    workers: int = 1,
) -> tuple[float, float]:
    """Empirical mean of the total squared decoding error ||u_hat - u||^2.

    Returns (mean, 95% confidence half-width), both totals across the k
    source symbols; divide by k for per-symbol values.
    """
    code = _fitted(code)
    trials = check_count(trials, "trials")
    workers = check_count(workers, "workers")
    source = _canonical_source(source)
    noise = NoiseModel(field=SOURCE_FIELD[source], sigma2=float(sigma2))
    seed = check_seed(seed)
    point_index = int(point_index)

    g_conj = code.generator_.conj()
    b_t = code.pseudo_inverse_.T
    k, n = code.k_, code.n_

    n_chunks = -(-trials // CHUNK)

    def run_chunk(ci: int) -> tuple[float, float]:
        m = min(CHUNK, trials - ci * CHUNK)
        rng = np.random.default_rng(np.random.SeedSequence((seed, point_index, ci)))
        u = _draw_source(rng, m, k, source)
        w = noise.sample(rng, (m, n))
        est = (u @ g_conj + w) @ b_t
        err = est - u
        per_trial = np.sum(err.real**2 + err.imag**2, axis=1)
        return float(np.sum(per_trial)), float(np.sum(per_trial**2))

    if workers == 1:
        partials = [run_chunk(ci) for ci in range(n_chunks)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(run_chunk, range(n_chunks)))

    total = 0.0
    total_sq = 0.0
    for part_sum, part_sq in partials:
        total += part_sum
        total_sq += part_sq
    mean = total / trials
    if trials < 2:
        return mean, 0.0
    var = max((total_sq - trials * mean * mean) / (trials - 1), 0.0)
    return mean, 1.96 * math.sqrt(var / trials)


def run_sweep(config: SimConfig, workers: int = 1) -> SimResult:
    """Monte Carlo MSE across the config's SNR grid, with the exact-formula gate.

    Each point's empirical mean must land within 4 confidence half-widths of
    the closed-form value; a miss aborts the sweep rather than emitting a
    silently wrong row.
    """
    code = codes.from_descriptor(config.code).fit()
    code_id = codes.descriptor_id(codes.to_descriptor(code))
    k = code.k_
    points = []
    for i, snr_db in enumerate(config.snr_db_points):
        sigma2 = sigma2_for_snr(code, snr_db, config.source)
        mc, ci = monte_carlo_mse(
            code,
            sigma2,
            config.trials_per_point,
            seed=config.seed,
            source=config.source,
            point_index=i,
            workers=workers,
        )
        exact = analytic_mse(code.generator_, sigma2)
        if abs(mc - exact) > 4.0 * ci:
            raise RuntimeError(
                f"{code_id} at {snr_db} dB: empirical MSE {mc!r} is more than 4 half-widths "
                f"({ci!r}) from the closed form {exact!r}"
            )
        points.append(
            SimPoint(
                snr_db=float(snr_db),
                sigma2=sigma2,
                mc_mse=mc / k,
                ci95=ci / k,
                analytic_mse=exact / k,
                log2_mse=math.log2(mc / k),
            )
        )
    return SimResult(code_id=code_id, points=tuple(points))


@dataclass(frozen=True)
class ComparisonRow:
    code_id: str
    gamma: float
    min_distance_ratio: float
    result: SimResult

    def to_dict(self) -> dict:
        return {
            "code_id": self.code_id,
            "gamma": self.gamma,
            "min_distance_ratio": self.min_distance_ratio,
            **self.result.to_dict(),
        }


@dataclass(frozen=True)
class ComparisonTable:
    snr_db_points: tuple
    rows: tuple

    def to_dict(self) -> dict:
        return {
            "snr_db_points": list(self.snr_db_points),
            "rows": [row.to_dict() for row in self.rows],
        }

    def to_text(self) -> str:
        """Aligned log2(per-symbol MSE) per code per SNR."""
        out = ["\t".join(["snr_db"] + [row.code_id for row in self.rows])]
        for i, snr in enumerate(self.snr_db_points):
            cells = [f"{snr:g}"] + [f"{row.result.points[i].log2_mse:.4f}" for row in self.rows]
            out.append("\t".join(cells))
        for row in self.rows:
            out.append(
                f"# {row.code_id}: gamma={row.gamma!r} min_distance_ratio={row.min_distance_ratio!r}"
            )
        return "\n".join(out)


def compare_codes(configs, workers: int = 1) -> ComparisonTable:
    """Run all configs on their shared grid with every code scaled to gain 1.

    Rescaling removes raw transmit power from the comparison, so the table
    isolates the codes' structure.  Reported gamma is the gain of the code
    as configured, before rescaling; the distance ratio is measured on the
    rescaled generator actually simulated.
    """
    configs = list(configs)
    if not configs:
        raise ValueError("compare_codes needs at least one config")
    grid = configs[0].snr_db_points
    source = configs[0].source
    for cfg in configs[1:]:
        if cfg.snr_db_points != grid:
            raise ValueError(
                f"all configs must share one SNR grid: {cfg.snr_db_points} != {grid}"
            )
        if cfg.source != source:
            raise ValueError(f"all configs must share one source: {cfg.source} != {source}")
    rows = []
    for cfg in configs:
        declared = codes.from_descriptor(cfg.code).fit()
        gamma = encoding_power_gain(declared.generator_)
        scaled = codes.normalize(declared)
        norm_cfg = replace(cfg, code=codes.to_descriptor(scaled))
        result = run_sweep(norm_cfg, workers=workers)
        rows.append(
            ComparisonRow(
                code_id=result.code_id,
                gamma=gamma,
                min_distance_ratio=min_distance_ratio(scaled.generator_),
                result=result,
            )
        )
    rows.sort(key=lambda row: row.code_id)
    return ComparisonTable(snr_db_points=grid, rows=tuple(rows))


def _iter_results(results) -> list[SimResult]:
    if isinstance(results, SimResult):
        return [results]
    if isinstance(results, ComparisonTable):
        return [row.result for row in results.rows]
    return list(results)


def emit_csv(results, path) -> None:
    """Write one row per (code, SNR point), sorted by code id then SNR."""
    flat = []
    for result in _iter_results(results):
        for p in result.points:
            flat.append((result.code_id, p))
    flat.sort(key=lambda item: (item[0], item[1].snr_db))
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for code_id, p in flat:
            writer.writerow(
                [repr(p.snr_db), repr(p.sigma2), code_id, repr(p.mc_mse), repr(p.ci95), repr(p.analytic_mse), repr(p.log2_mse)]
            )


def emit_json(results, path) -> None:
    """JSON mirror of the result objects."""
    if isinstance(results, (SimResult, ComparisonTable)):
        payload = results.to_dict()
    else:
        payload = [r.to_dict() for r in _iter_results(results)]
    with open(path, "w", encoding="ascii") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_csv(path) -> list[dict]:
    """Read an emit_csv file back into typed row dicts."""
    with open(path, "r", newline="", encoding="ascii") as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise ValueError(f"{path}: empty CSV, expected a header row") from None
        if header != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected header {header!r}")
        rows = []
        for record in reader:
            row = dict(zip(CSV_COLUMNS, record))
            for key in CSV_COLUMNS:
                if key != "code_id":
                    row[key] = float(row[key])
            rows.append(row)
    return rows
