"""Monte Carlo sweeps over (n, c) grids.

Each trial owns a seed derived from the master seed and its global index
(``grid_point_index * trials + t``), so results do not depend on how trials
are scheduled across workers.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import math
import os
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from statistics import mean

import numpy as np

from . import __version__
from .certify import Verdict, certify
from .collapse import collapse_fully
from .constants import solve_c2, solve_gamma2
from .core import find_tetra_boundaries, shared_face_pairs
from .homology import DEFAULT_PRIMES, betti2, h1_torsion
from .sampler import RNG_ALGORITHM, SampleSpec, derive_trial_seed, sample

log = logging.getLogger(__name__)

CSV_COLUMNS = (
    "n", "c", "seed", "f2_initial", "f2_core", "collapsible_Y", "tetra_count",
    "shared_pairs", "collapsible_Z", "betti2_Y", "betti2_Z", "torsion_found",
    "verdict", "wall_ms",
)

TORSION_AUTO_MAX_N = 60
DEFAULT_N_VALUES = (100, 150, 200)


class ConfigError(ValueError):
    pass


class InvariantError(AssertionError):
    pass


def default_c_values() -> list[float]:
    return [2.0, solve_gamma2().value, 2.6, solve_c2().value, 3.0]


@dataclass
class SweepConfig:
    """Grid, trial count and toggles of a sweep.

    ``compute_torsion`` is True, False, or None for "only when n <= 60".
    ``record_timing`` False leaves ``wall_ms`` empty so outputs are byte-stable.
    """

    n_values: list[int] = field(default_factory=lambda: list(DEFAULT_N_VALUES))
    c_values: list[float] = field(default_factory=default_c_values)
    trials: int = 20
    master_seed: int = 0
    compute_torsion: bool | None = None
    compute_betti_Y: bool = False
    record_timing: bool = True
    workers: int = 1
    out_dir: str | None = None

    def validate(self) -> "SweepConfig":
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not self.n_values or not self.c_values:
            raise ConfigError("n_values and c_values must be nonempty")
        if any(n < 1 for n in self.n_values):
            raise ConfigError("every n must be >= 1")
        if any(c < 0 for c in self.c_values):
            raise ConfigError("every c must be >= 0")
        if max(self.c_values) > min(self.n_values):
            raise ConfigError("need c <= n for every grid point (p = c/n <= 1)")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        return self

    def torsion_for(self, n: int) -> bool:
        if self.compute_torsion is None:
            return n <= TORSION_AUTO_MAX_N
        return self.compute_torsion

    def grid(self) -> list[tuple[int, float]]:
        return [(n, c) for n in self.n_values for c in self.c_values]

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**data)
        cfg.n_values = [int(n) for n in cfg.n_values]
        cfg.c_values = [float(c) for c in cfg.c_values]
        return cfg.validate()

    @classmethod
    def from_json(cls, text: str) -> "SweepConfig":
        return cls.from_dict(json.loads(text))


PRESETS = {
    # H_1 torsion shows up near c2; it needs many small samples, not large n
    "torsion-probe": lambda: SweepConfig(
        n_values=[30, 40, 50],
        c_values=[2.5, 2.65, solve_c2().value, 2.85, 3.0],
        trials=200,
        compute_torsion=True,
    ),
    "landmarks": lambda: SweepConfig(),
}


@dataclass(frozen=True)
class TrialResult:
    n: int
    c: float
    seed: int
    f2_initial: int
    f2_core: int
    collapsible_Y: bool
    tetra_count: int
    shared_pair_count: int
    collapsible_Z: bool
    verdict: str
    betti2_Y: int | None = None
    betti2_Z: int | None = None
    torsion_found: bool | None = None
    wall_time: float | None = None

    def check(self) -> None:
        if self.f2_core > self.f2_initial:
            raise InvariantError(f"f2_core {self.f2_core} > f2_initial {self.f2_initial}")
        if self.collapsible_Y != (self.f2_core == 0):
            raise InvariantError("collapsible_Y disagrees with f2_core")
        if self.betti2_Y is not None and self.betti2_Z is not None:
            if self.betti2_Z < self.betti2_Y - self.tetra_count:
                raise InvariantError("betti2_Z dropped by more than one per boundary")
        if self.verdict == Verdict.FREE.value and not (
            self.collapsible_Z and self.shared_pair_count == 0
        ):
            raise InvariantError("FREE verdict without its evidence")
        if self.verdict == Verdict.NOT_FREE_MODULO_ASPHERICITY.value and not self.betti2_Z:
            raise InvariantError("NOT_FREE verdict without beta_2(Z) > 0")

    def csv_row(self) -> list[str]:
        def cell(v):
            if v is None:
                return ""
            if isinstance(v, bool):
                return "1" if v else "0"
            return str(v)

        wall = "" if self.wall_time is None else f"{self.wall_time * 1000:.1f}"
        return [
            cell(self.n), repr(float(self.c)), cell(self.seed), cell(self.f2_initial),
            cell(self.f2_core), cell(self.collapsible_Y), cell(self.tetra_count),
            cell(self.shared_pair_count), cell(self.collapsible_Z), cell(self.betti2_Y),
            cell(self.betti2_Z), cell(self.torsion_found), self.verdict, wall,
        ]

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def run_trial(
    n: int,
    c: float,
    seed: int,
    compute_torsion: bool = False,
    compute_betti_Y: bool = False,
    record_timing: bool = True,
) -> TrialResult:
    t0 = time.perf_counter()
    y = sample(SampleSpec(n=n, c=c, seed=seed))
    core_y, _ = collapse_fully(y)
    cert = certify(y, torsion=compute_torsion)
    ev = cert.evidence
    b2y = betti2(core_y) if compute_betti_Y else None
    result = TrialResult(
        n=n,
        c=c,
        seed=seed,
        f2_initial=y.f2,
        f2_core=core_y.f2,
        collapsible_Y=core_y.f2 == 0,
        tetra_count=len(ev.report.boundaries),
        shared_pair_count=len(ev.report.shared_face_pairs),
        collapsible_Z=ev.z_collapsible,
        verdict=cert.verdict.value,
        betti2_Y=b2y,
        betti2_Z=ev.betti2_z,
        torsion_found=None if ev.torsion_h1 is None else bool(ev.torsion_h1),
        wall_time=(time.perf_counter() - t0) if record_timing else None,
    )
    result.check()
    return result


@dataclass(frozen=True)
class RunManifest:
    tool_version: str
    rng_algorithm: str
    master_seed: int
    config: dict
    timestamp: str
    primes: tuple[int, ...]
    python: str = platform.python_version()
    numpy: str = np.__version__

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["primes"] = list(self.primes)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunManifest":
        d = dict(d)
        d["primes"] = tuple(d["primes"])
        return cls(**d)

    def sweep_config(self) -> SweepConfig:
        return SweepConfig.from_dict(self.config)


def trial_jobs(config: SweepConfig) -> list[tuple]:
    jobs = []
    for g, (n, c) in enumerate(config.grid()):
        for t in range(config.trials):
            seed = derive_trial_seed(config.master_seed, g * config.trials + t)
            jobs.append((n, c, seed, config.torsion_for(n), config.compute_betti_Y,
                         config.record_timing))
    return jobs


def _run_job(job):
    return run_trial(*job)


def _stderr(xs: list[float]) -> float:
    if len(xs) < 2:
        return float("nan")
    return float(np.std(xs, ddof=1) / math.sqrt(len(xs)))


def aggregate(results: list[TrialResult]) -> list[dict]:
    """One row per (n, c) grid point, in first-seen order."""
    groups: dict[tuple[int, float], list[TrialResult]] = {}
    for r in results:
        groups.setdefault((r.n, r.c), []).append(r)
    rows = []
    for (n, c), rs in groups.items():
        k = len(rs)
        core = [r.f2_core / n**2 for r in rs]
        tetra = [float(r.tetra_count) for r in rs]
        b2z = [r.betti2_Z / n**2 for r in rs if r.betti2_Z is not None]
        b2y = [r.betti2_Y / n**2 for r in rs if r.betti2_Y is not None]
        tors = [r.torsion_found for r in rs if r.torsion_found is not None]
        row = {
            "n": n,
            "c": c,
            "trials": k,
            "frac_collapsible_Y": sum(r.collapsible_Y for r in rs) / k,
            "frac_collapsible_Z": sum(r.collapsible_Z for r in rs) / k,
            "mean_f2_core_n2": mean(core),
            "stderr_f2_core_n2": _stderr(core),
            "mean_tetra": mean(tetra),
            "stderr_tetra": _stderr(tetra),
            "predicted_tetra": c**4 / 24,
            "frac_shared": sum(r.shared_pair_count > 0 for r in rs) / k,
            "mean_betti2_Z_n2": mean(b2z) if b2z else None,
            "stderr_betti2_Z_n2": _stderr(b2z) if b2z else None,
            "mean_betti2_Y_n2": mean(b2y) if b2y else None,
            "torsion_incidence": (sum(tors) / len(tors)) if tors else None,
        }
        for v in Verdict:
            row[f"frac_{v.value}"] = sum(r.verdict == v.value for r in rs) / k
        rows.append(row)
    return rows


def make_manifest(config: SweepConfig) -> RunManifest:
    return RunManifest(
        tool_version=__version__,
        rng_algorithm=RNG_ALGORITHM,
        master_seed=config.master_seed,
        config=config.to_dict(),
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        primes=DEFAULT_PRIMES,
    )


def run_sweep(config: SweepConfig, workers: int | None = None):
    """Run every trial of ``config``; returns (manifest, results, aggregates).

    Writes manifest.json, trials.csv, trials.json and aggregates.csv when
    ``config.out_dir`` is set.
    """
    config.validate()
    workers = workers or config.workers
    manifest = make_manifest(config)
    jobs = trial_jobs(config)
    log.info("running %d trials on %d worker(s)", len(jobs), workers)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_run_job(j) for j in jobs]
    table = aggregate(results)
    if config.out_dir:
        write_outputs(Path(config.out_dir), manifest, results, table)
    return manifest, results, table


def write_outputs(out: Path, manifest: RunManifest, results, table) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / "manifest.json").write_text(json.dumps(manifest.to_dict(), indent=2) + "\n")
    emit_csv(results, out / "trials.csv")
    emit_json(results, out / "trials.json")
    emit_aggregates_csv(table, out / "aggregates.csv")


def csv_text(results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in results:
        w.writerow(r.csv_row())
    return buf.getvalue()


def emit_csv(results, path) -> None:
    Path(path).write_text(csv_text(results), encoding="utf-8")


def emit_json(results, path) -> None:
    Path(path).write_text(json.dumps([r.to_dict() for r in results], indent=1) + "\n",
                          encoding="utf-8")


def read_json(path) -> list[TrialResult]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return [TrialResult(**d) for d in data]


def emit_aggregates_csv(table: list[dict], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if not table:
            return
        w = csv.DictWriter(fh, fieldnames=list(table[0]), lineterminator="\n")
        w.writeheader()
        for row in table:
            w.writerow({k: ("" if v is None else v) for k, v in row.items()})


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("LMTOPO_WORKERS", "1")))
    except ValueError:
        return 1
