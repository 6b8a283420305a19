import numpy as np
import pandas as pd

from errors import DegenerateTarget, EmptyProtectedSet, ShapeMismatch


def _values(data) -> np.ndarray:
    arr = np.asarray(getattr(data, 'samples', data), dtype=float)
    return arr[:, None] if arr.ndim == 1 else arr


def mechanism_leakage(pre, post, protected) -> float:
    """
    Mean over protected columns of |mean(post) - mean(pre)| / std(pre).
    `protected` lists the columns that must not move (non-descendants of the target).
    """
    pre, post = _values(pre), _values(post)
    protected = sorted(int(c) for c in protected)
    if not protected:
        raise EmptyProtectedSet('mechanism_leakage needs at least one protected column.')
    if pre.shape != post.shape:
        raise ShapeMismatch(f'pre {pre.shape} and post {post.shape} must match.')
    before, after = pre[:, protected], post[:, protected]
    scale = before.std(axis=0)
    # a column constant before the intervention leaks by any amount it moves
    scale = np.where(scale > 0, scale, 1.0)
    return float(np.mean(np.abs(after.mean(axis=0) - before.mean(axis=0)) / scale))


def support_coverage(generated, target) -> float:
    """Mean over columns of std(generated) / std(target); above 1 means over-dispersed."""
    generated, target = _values(generated), _values(target)
    if generated.shape[1] != target.shape[1]:
        raise ShapeMismatch(f'{generated.shape[1]} generated vs {target.shape[1]} target columns.')
    spread = target.std(axis=0)
    if np.any(spread == 0):
        raise DegenerateTarget(f'target columns {np.flatnonzero(spread == 0).tolist()} have zero spread.')
    return float(np.mean(generated.std(axis=0) / spread))


def recovery_mse(predicted, truth) -> float:
    predicted, truth = _values(predicted), _values(truth)
    if predicted.shape != truth.shape:
        raise ShapeMismatch(f'predicted {predicted.shape} vs truth {truth.shape}.')
    return float(np.mean((predicted - truth) ** 2))


def transport_cost_l2(source, generated) -> float:
    """Mean Euclidean distance between paired rows."""
    source, generated = _values(source), _values(generated)
    if source.shape != generated.shape:
        raise ShapeMismatch(f'source {source.shape} vs generated {generated.shape}.')
    return float(np.mean(np.linalg.norm(generated - source, axis=1)))


def mode_fractions(labels, n_modes: int = 2) -> np.ndarray:
    """Share of rows carrying each label 0..n_modes-1."""
    labels = np.asarray(labels, dtype=int)
    return np.bincount(labels, minlength=n_modes)[:n_modes] / max(len(labels), 1)


def circularity(points) -> float:
    """std / mean of the distance of planar points to their centroid (0 for a perfect circle)."""
    pts = _values(points)
    radius = np.linalg.norm(pts - pts.mean(axis=0), axis=1)
    return float(radius.std() / radius.mean())


def metrics_table(runs: dict) -> pd.DataFrame:
    """
    One row per method from {method: {metric: value}}, metrics as columns.
    """
    rows = [{'Method': name, **values} for name, values in runs.items()]
    return pd.DataFrame(rows).set_index('Method')
