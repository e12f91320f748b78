"""Dataset ingestion (numeric CSV matrices, integer label files) and the
labeled synthetic generators used by the test harness."""

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import DataError


@dataclass
class Dataset:
    x: np.ndarray
    labels: np.ndarray | None
    name: str

    @property
    def n(self):
        return self.x.shape[0]


def _parse_matrix(path):
    rows = []
    width = None
    with open(path, newline="") as fh:
        for lineno, record in enumerate(csv.reader(fh), start=1):
            if not record or (len(record) == 1 and not record[0].strip()):
                continue
            if width is None:
                width = len(record)
            elif len(record) != width:
                raise DataError(
                    f"{path}: line {lineno} has {len(record)} fields, "
                    f"expected {width}")
            parsed = []
            for colno, cell in enumerate(record, start=1):
                try:
                    value = float(cell)
                except ValueError:
                    raise DataError(
                        f"{path}: line {lineno}, column {colno}: "
                        f"not a number: {cell!r}") from None
                if not math.isfinite(value):
                    raise DataError(
                        f"{path}: line {lineno}, column {colno}: "
                        f"non-finite value {cell!r}")
                parsed.append(value)
            rows.append(parsed)
    if not rows:
        raise DataError(f"{path}: no data rows")
    return np.asarray(rows, dtype=np.float64)


def _parse_labels(path):
    labels = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                labels.append(int(text))
            except ValueError:
                raise DataError(
                    f"{path}: line {lineno}: not an integer label: {text!r}"
                ) from None
    if not labels:
        raise DataError(f"{path}: no labels")
    arr = np.asarray(labels, dtype=np.int64)
    if arr.min() < 0:
        raise DataError(f"{path}: labels must be nonnegative")
    return arr


def load_dataset(matrix_path, labels_path=None):
    """Read one sample per CSV row, optionally with one integer label per line."""
    try:
        x = _parse_matrix(matrix_path)
        labels = _parse_labels(labels_path) if labels_path is not None else None
    except OSError as exc:
        raise DataError(f"cannot read dataset: {exc}") from exc
    if labels is not None:
        if len(labels) != x.shape[0]:
            raise DataError(
                f"{labels_path}: {len(labels)} labels for {x.shape[0]} samples")
    return Dataset(x=x, labels=labels, name=Path(matrix_path).stem)


def make_blobs(n=300, d=10, c=3, std=0.5, sep=8.0, seed=0):
    """Gaussian blobs with guaranteed center separation.

    Centers sit on a circle in the first two coordinates (a line if d == 1),
    so all pairwise center distances are at least sep * std * 2 sin(pi/c).
    """
    rng = np.random.default_rng(seed)
    sizes = np.full(c, n // c)
    sizes[: n % c] += 1
    centers = np.zeros((c, d))
    if d == 1:
        centers[:, 0] = sep * std * np.arange(c)
    else:
        angles = 2.0 * np.pi * np.arange(c) / max(c, 2)
        centers[:, 0] = sep * std * np.cos(angles)
        centers[:, 1] = sep * std * np.sin(angles)
    xs, ys = [], []
    for j in range(c):
        xs.append(centers[j] + std * rng.standard_normal((sizes[j], d)))
        ys.append(np.full(sizes[j], j, dtype=np.int64))
    order = rng.permutation(n)
    return np.vstack(xs)[order], np.concatenate(ys)[order]


def make_moons(n=200, noise=0.05, seed=0):
    """Two interleaved half-circles with Gaussian noise.

    Arc angles are evenly spaced (the standard benchmark layout), so the
    only randomness is the additive noise."""
    rng = np.random.default_rng(seed)
    n_out = n // 2
    n_in = n - n_out
    t_out = np.linspace(0.0, np.pi, n_out)
    t_in = np.linspace(0.0, np.pi, n_in)
    outer = np.stack([np.cos(t_out), np.sin(t_out)], axis=1)
    inner = np.stack([1.0 - np.cos(t_in), 0.5 - np.sin(t_in)], axis=1)
    x = np.vstack([outer, inner]) + noise * rng.standard_normal((n, 2))
    y = np.concatenate([np.zeros(n_out, dtype=np.int64),
                        np.ones(n_in, dtype=np.int64)])
    order = rng.permutation(n)
    return x[order], y[order]


def make_components(n=120, d=2, c=3, std=0.05, seed=0):
    """Tight clusters so far apart that a small-k NN graph disconnects."""
    return make_blobs(n=n, d=d, c=c, std=std, sep=200.0, seed=seed)


SYNTHETIC_KINDS = {
    "blobs": make_blobs,
    "moons": make_moons,
    "components": make_components,
}


def save_dataset(x, labels, prefix):
    """Write <prefix>.csv and <prefix>.labels.csv; returns the two paths."""
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    matrix_path = prefix.with_suffix(".csv")
    labels_path = prefix.parent / (prefix.name + ".labels.csv")
    with open(matrix_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in np.asarray(x):
            writer.writerow([repr(float(v)) for v in row])
    with open(labels_path, "w") as fh:
        for v in np.asarray(labels, dtype=np.int64):
            fh.write(f"{int(v)}\n")
    return matrix_path, labels_path
