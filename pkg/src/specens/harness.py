"""End-to-end experiment orchestration.

A run builds the similarity graph once, sweeps the base clusterer over a
range of cluster counts with fresh seeds until the ensemble is full, weights
each member by its diversity score, combines the evidence, cuts the final
partition, and scores it against ground truth when labels exist. Everything
lands in a manifest that is byte-for-byte reproducible apart from wall-clock
timings. Sweeps rerun the pipeline over a grid of corruption rates or
feature-retention fractions.
"""

from __future__ import annotations

import csv
import hashlib
import json
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from . import consensus, decorrelate, diversity, evaluation, graph, tksc
from . import dataset as dataset_mod
from .dataset import CorruptionSpec, Dataset
from .errors import ConfigError, StageError

METHODS = ("wsce", "eac_spectral", "spectral")
SWEEP_AXES = ("noise", "missing", "d_frac")
SYNTH_KINDS = ("half_ring",)


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs; defaults mirror the benchmark setup."""

    data_path: str | None = None
    label_column: str | None = None
    synth: str | None = None
    synth_n: int = 400
    synth_noise_std: float = 0.05
    k: int | None = None
    d: int = 0
    d_frac: float | None = None
    knn: int = 0
    unsquared: bool = False
    ensemble_size: int = 20
    repeats: int = 10
    seed: int = 0
    method: str = "wsce"
    corruption: CorruptionSpec | None = None


@dataclass
class RunManifest:
    """Reproducible record of one run; only ``timing`` varies between identical runs."""

    config: dict
    method: str
    dataset_name: str
    n: int
    m: int
    k: int
    members: list
    m_fingerprints: list
    final_assignments: list
    accuracies: list | None
    accuracy_mean: float | None
    accuracy_std: float | None
    timing: dict

    def to_dict(self, include_timing: bool = True) -> dict:
        out = asdict(self)
        if not include_timing:
            out.pop("timing")
        return out

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=True) + "\n"


def member_seed(seed: int, repeat: int, index: int) -> int:
    """Deterministic per-member seed derived from the master seed."""
    return int(np.random.SeedSequence([seed, repeat, index]).generate_state(1)[0])


@contextmanager
def _stage(name: str, timing: dict):
    start = time.perf_counter()
    try:
        yield
    except StageError:
        raise
    except Exception as err:
        raise StageError(name, err) from err
    finally:
        timing[name] = timing.get(name, 0.0) + time.perf_counter() - start


def _load(cfg: RunConfig) -> Dataset:
    if cfg.synth is not None:
        return dataset_mod.make_half_ring(cfg.synth_n, cfg.synth_noise_std, cfg.seed)
    return dataset_mod.load_csv(cfg.data_path, cfg.label_column)


def _resolve_k(cfg: RunConfig, ds: Dataset) -> int:
    if cfg.k is not None:
        k = cfg.k
    elif ds.labels is not None:
        k = int(np.unique(ds.labels).size)
    else:
        raise ConfigError("k not given and the dataset has no labels to infer it from")
    if not 2 <= k <= ds.n:
        raise ConfigError(f"final cluster count k={k} outside [2, {ds.n}]")
    return k


def _resolve_d(cfg: RunConfig, m: int) -> int:
    if cfg.d_frac is None:
        return cfg.d
    if not 0.0 < cfg.d_frac <= 1.0:
        raise ConfigError(f"d_frac must lie in (0, 1], got {cfg.d_frac}")
    return min(m, max(1, round(cfg.d_frac * m)))


def run(cfg: RunConfig, dump_dir=None) -> RunManifest:
    """Execute one configuration and return its manifest.

    ``dump_dir`` additionally writes the first repeat's intermediate matrices
    (similarity triples, co-association, dendrogram, corruption mask) as CSVs.
    """
    if cfg.method not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}, got '{cfg.method}'")
    if cfg.repeats < 1:
        raise ConfigError(f"repeats must be positive, got {cfg.repeats}")
    if (cfg.data_path is None) == (cfg.synth is None):
        raise ConfigError("exactly one of data_path and synth must be set")
    if cfg.synth is not None and cfg.synth not in SYNTH_KINDS:
        raise ConfigError(f"unknown synthetic kind '{cfg.synth}', know {SYNTH_KINDS}")
    timing: dict = {}
    with _stage("load", timing):
        ds = _load(cfg)
    with _stage("normalize", timing):
        ds = dataset_mod.normalize(ds)
    if cfg.corruption is not None:
        with _stage("corrupt", timing):
            ds = dataset_mod.corrupt(ds, cfg.corruption)
    k = _resolve_k(cfg, ds)
    ensemble = cfg.method != "spectral"
    if ensemble and cfg.ensemble_size < k + 1:
        raise ConfigError(f"ensemble size {cfg.ensemble_size} is below k+1={k + 1}")
    with _stage("map", timing):
        mapped = decorrelate.fit_map(ds, _resolve_d(cfg, ds.m))
    with _stage("distance", timing):
        distances = graph.distance_matrix(mapped)
    neighbor_count = cfg.knn if cfg.knn else graph.default_neighbor_count(ds.n)
    with _stage("similarity", timing):
        sim = graph.similarity(distances, neighbor_count, squared=not cfg.unsquared)

    # Base sweep over cluster counts, clamped to n, cycled until the ensemble is full.
    sweep_values = [min(width, ds.n) for width in range(2, k + 3)]
    member_widths = [sweep_values[i % len(sweep_values)] for i in range(cfg.ensemble_size)]

    members_log = []
    fingerprints = []
    finals = []
    accuracies = [] if ds.labels is not None else None
    dump_payload = None
    for rep in range(cfg.repeats):
        rep_members = []
        modular = None
        co = None
        with _stage("ensemble", timing):
            if ensemble:
                zeta = []
                for idx, width in enumerate(member_widths):
                    seed = member_seed(cfg.seed, rep, idx)
                    partition, modular = tksc.tksc(sim, width, seed)
                    score = diversity.normalized_modularity(partition, modular)
                    zeta.append(consensus.EnsembleMember(partition, score.nm))
                    rep_members.append({"l": width, "seed": seed, "nm": float(score.nm)})
            else:
                seed = member_seed(cfg.seed, rep, 0)
                final, modular = tksc.tksc(sim, k, seed)
                rep_members.append({"l": k, "seed": seed})
        if ensemble:
            with _stage("consensus", timing):
                co = consensus.weac(zeta) if cfg.method == "wsce" else consensus.eac(zeta)
                final = consensus.average_linkage_cut(co, k)
        fingerprints.append(hashlib.sha256(modular.m.tobytes()).hexdigest())
        if accuracies is not None:
            with _stage("evaluate", timing):
                accuracies.append(float(evaluation.accuracy(final, ds.labels).accuracy))
        members_log.append(rep_members)
        finals.append([int(v) for v in final.assign])
        if rep == 0 and dump_dir is not None:
            dump_payload = (ds, sim, co)
    manifest = RunManifest(
        config=asdict(cfg),
        method=cfg.method,
        dataset_name=ds.name,
        n=ds.n,
        m=ds.m,
        k=k,
        members=members_log,
        m_fingerprints=fingerprints,
        final_assignments=finals,
        accuracies=accuracies,
        accuracy_mean=float(np.mean(accuracies)) if accuracies else None,
        accuracy_std=float(np.std(accuracies)) if accuracies else None,
        timing=timing,
    )
    if dump_payload is not None:
        _dump_intermediates(dump_payload, Path(dump_dir))
    return manifest


def _dump_intermediates(payload, dump_dir: Path) -> None:
    ds, sim, co = payload
    dump_dir.mkdir(parents=True, exist_ok=True)
    graph.save_triples(sim, dump_dir / "similarity.csv")
    if ds.corruption_mask is not None:
        dataset_mod.save_mask_csv(ds, dump_dir / "mask.csv")
    if co is not None:
        consensus.save_coassociation_csv(co, dump_dir / "coassociation.csv")
        merges = consensus.upgma_merges(co.xi.max() - co.xi)
        consensus.save_merges_csv(merges, dump_dir / "dendrogram.csv")


def run_wsce(cfg: RunConfig) -> RunManifest:
    """Run the weighted ensemble method."""
    if cfg.method != "wsce":
        cfg = replace(cfg, method="wsce")
    return run(cfg)


def run_baseline(cfg: RunConfig) -> RunManifest:
    """Run one of the comparison methods (plain spectral, unweighted ensemble)."""
    if cfg.method not in ("spectral", "eac_spectral"):
        raise ConfigError(f"baseline method must be spectral or eac_spectral, got '{cfg.method}'")
    return run(cfg)


@dataclass
class SweepCell:
    """One (value, method) cell of a sweep; exactly one of manifest/error is set."""

    value: float
    method: str
    manifest: RunManifest | None
    error: str | None


def run_sweep(base: RunConfig, axis: str, values, methods=None) -> list[SweepCell]:
    """Rerun ``base`` for every grid value (and method), sharing all seeds.

    A failing cell is recorded with its error message and the sweep moves on.
    """
    if axis not in SWEEP_AXES:
        raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}, got '{axis}'")
    values = [float(v) for v in values]
    if not values:
        raise ConfigError("sweep needs at least one value")
    if values != sorted(values):
        raise ConfigError("sweep values must be ascending")
    methods = list(methods) if methods else [base.method]
    cells = []
    for value in values:
        for method in methods:
            cfg = replace(base, method=method)
            if axis == "d_frac":
                cfg = replace(cfg, d_frac=value)
            else:
                corrupt_seed = base.corruption.seed if base.corruption is not None else base.seed
                cfg = replace(cfg, corruption=CorruptionSpec(axis, value, corrupt_seed))
            try:
                cells.append(SweepCell(value, method, run(cfg), None))
            except Exception as err:
                cells.append(SweepCell(value, method, None, str(err)))
    return cells


def sweep_rows(cells) -> list[tuple]:
    """Flatten sweep cells into (value, method, mean_accuracy, std_accuracy) rows."""
    rows = []
    for cell in cells:
        if cell.manifest is None or cell.manifest.accuracy_mean is None:
            rows.append((cell.value, cell.method, float("nan"), float("nan")))
        else:
            rows.append((cell.value, cell.method, cell.manifest.accuracy_mean, cell.manifest.accuracy_std))
    return rows


def write_sweep_csv(cells, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["value", "method", "mean_accuracy", "std_accuracy"])
        for value, method, mean, std in sweep_rows(cells):
            writer.writerow([repr(value), method, repr(mean), repr(std)])
