"""Dataset loading, normalization, synthesis, and controlled corruption.

Feature matrices are stored one row per instance. Every random choice flows
through an explicit integer seed, so synthetic and corrupted datasets can be
rebuilt bit for bit.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, InputError

CORRUPTION_KINDS = ("noise", "missing")


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Dataset:
    """A feature matrix with optional integer ground-truth labels.

    ``corruption_mask`` marks cells touched by :func:`corrupt`; it is ``None``
    for datasets that never went through corruption.
    """

    features: np.ndarray
    labels: np.ndarray | None = None
    name: str = "dataset"
    corruption_mask: np.ndarray | None = None

    def __post_init__(self):
        feats = _frozen_array(self.features, float)
        if feats.ndim != 2:
            raise InputError("features must be a 2-d matrix")
        n, m = feats.shape
        if n < 2 or m < 1:
            raise InputError(f"need at least 2 instances and 1 feature, got {n}x{m}")
        object.__setattr__(self, "features", feats)
        if self.labels is not None:
            labels = _frozen_array(self.labels, int)
            if labels.shape != (n,):
                raise InputError(f"got {labels.shape[0] if labels.ndim == 1 else '?'} labels for {n} instances")
            if np.unique(labels).size < 2:
                raise InputError("labels must contain at least 2 distinct values")
            object.__setattr__(self, "labels", labels)
        if self.corruption_mask is not None:
            mask = _frozen_array(self.corruption_mask, bool)
            if mask.shape != (n, m):
                raise InputError("corruption mask shape must match features")
            object.__setattr__(self, "corruption_mask", mask)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def m(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class CorruptionSpec:
    """What to corrupt: additive unit Gaussian noise or mean-imputed missing cells."""

    kind: str
    rate: float
    seed: int = 0

    def __post_init__(self):
        if self.kind not in CORRUPTION_KINDS:
            raise ConfigError(f"corruption kind must be one of {CORRUPTION_KINDS}, got '{self.kind}'")
        if not 0.0 <= float(self.rate) <= 1.0:
            raise ConfigError(f"corruption rate must lie in [0, 1], got {self.rate}")


def load_csv(path, label_column: str | None = None) -> Dataset:
    """Read a numeric CSV with a header row; one column may hold class labels.

    Label values are re-encoded to contiguous integers starting at 0, in
    sorted order of their original text.
    """
    path = Path(path)
    if not path.exists():
        raise InputError(f"no such file: {path}")
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if any(cell.strip() for cell in row)]
    if len(rows) < 2:
        raise InputError(f"{path.name}: need a header row and at least one data row")
    header = [cell.strip() for cell in rows[0]]
    label_idx = None
    if label_column is not None:
        if label_column not in header:
            raise ConfigError(f"label column '{label_column}' not found in header {header}")
        label_idx = header.index(label_column)
    feats = []
    raw_labels = []
    for rownum, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise InputError(f"{path.name} row {rownum}: expected {len(header)} fields, got {len(row)}")
        vals = []
        for col, cell in enumerate(row):
            text = cell.strip()
            if col == label_idx:
                raw_labels.append(text)
                continue
            try:
                value = float(text)
            except ValueError:
                raise InputError(
                    f"{path.name} row {rownum}, column '{header[col]}': cannot parse '{text}' as a number"
                ) from None
            if not math.isfinite(value):
                raise InputError(f"{path.name} row {rownum}, column '{header[col]}': '{text}' is not finite")
            vals.append(value)
        feats.append(vals)
    labels = None
    if label_idx is not None:
        _, labels = np.unique(np.array(raw_labels), return_inverse=True)
    return Dataset(np.array(feats, dtype=float), labels, name=path.stem)


def normalize(ds: Dataset) -> Dataset:
    """Z-score every feature column using the population (1/n) variance.

    Constant columns cannot be scaled; they are mapped to all zeros and
    reported through a warning.
    """
    x = ds.features
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    constant = np.ptp(x, axis=0) == 0
    out = (x - mean) / np.where(constant, 1.0, std)
    if constant.any():
        out[:, constant] = 0.0
        warnings.warn(f"constant feature columns zeroed: {np.flatnonzero(constant).tolist()}")
    return Dataset(out, ds.labels, ds.name, ds.corruption_mask)


def make_half_ring(n: int, noise_std: float = 0.05, seed: int = 0) -> Dataset:
    """Two interleaved unit-radius half circles with Gaussian jitter.

    The standard two-moons layout: the first arc is the upper half of the
    unit circle at the origin, the second the lower half of a unit circle
    centered at (1, 0.5). Points split evenly between the arcs; an odd ``n``
    is rounded down with a warning.
    """
    if n < 4:
        raise ConfigError(f"need at least 4 points for two arcs, got {n}")
    if noise_std < 0:
        raise ConfigError(f"noise_std must be nonnegative, got {noise_std}")
    if n % 2:
        warnings.warn(f"instance count {n} is odd, generating {n - 1} points")
        n -= 1
    half = n // 2
    theta = np.linspace(0.0, np.pi, half)
    upper = np.column_stack([np.cos(theta), np.sin(theta)])
    lower = np.column_stack([1.0 - np.cos(theta), 0.5 - np.sin(theta)])
    points = np.vstack([upper, lower])
    if noise_std > 0:
        points = points + np.random.default_rng(seed).normal(0.0, noise_std, points.shape)
    labels = np.repeat([0, 1], half)
    return Dataset(points, labels, name=f"half_ring_{n}")


def corrupt(ds: Dataset, spec: CorruptionSpec) -> Dataset:
    """Corrupt exactly floor(rate * n * m) cells, chosen uniformly without replacement.

    ``noise`` adds a standard normal draw to each chosen cell; ``missing``
    overwrites it with the column mean of the input (mean imputation). The
    touched cells are recorded in the returned dataset's corruption mask.
    A rate of 0 returns an exact copy.
    """
    n, m = ds.features.shape
    count = int(math.floor(spec.rate * n * m))
    mask = np.zeros((n, m), dtype=bool)
    flat = ds.features.copy().reshape(-1)
    if count:
        rng = np.random.default_rng(spec.seed)
        cells = np.sort(rng.choice(n * m, size=count, replace=False))
        mask.reshape(-1)[cells] = True
        if spec.kind == "noise":
            flat[cells] += rng.standard_normal(count)
        else:
            col_means = ds.features.mean(axis=0)
            flat[cells] = col_means[cells % m]
    return Dataset(flat.reshape(n, m), ds.labels, ds.name, corruption_mask=mask)


def save_csv(ds: Dataset, path) -> None:
    """Write the dataset in the dialect :func:`load_csv` reads."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = [f"f{j}" for j in range(ds.m)]
        if ds.labels is not None:
            header.append("label")
        writer.writerow(header)
        for i in range(ds.n):
            row = [repr(float(v)) for v in ds.features[i]]
            if ds.labels is not None:
                row.append(str(int(ds.labels[i])))
            writer.writerow(row)


def save_mask_csv(ds: Dataset, path) -> None:
    """Write the corruption mask as (row, col) pairs in row-major order."""
    if ds.corruption_mask is None:
        raise ConfigError("dataset has no corruption mask to export")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row", "col"])
        for i, j in np.argwhere(ds.corruption_mask):
            writer.writerow([int(i), int(j)])
