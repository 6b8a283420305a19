import numpy as np

from graph.seeding import derive_rng
from .Dataset import Dataset


# Latent reference population: i.i.d. standard normal, the source law of every local bridge
def build_latent_source(n: int, d: int, seed: int, names=None) -> Dataset:
    rng = derive_rng(seed, 7001)
    return Dataset(rng.standard_normal((n, d)), names)


def random_embedding(dim: int, rank: int, seed: int) -> np.ndarray:
    """dim x rank matrix with orthonormal columns."""
    rng = derive_rng(seed, 7002)
    q, _ = np.linalg.qr(rng.standard_normal((dim, rank)))
    return q[:, :rank]


# Double moons in the plane: label 0 is the upper arc, label 1 the lower one
def build_double_moons(
    n: int,
    seed: int,
    radius: float = 1.0,
    gap: float = 0.5,
    noise: float = 0.05,
    offset=(0.0, 0.0),
    weight: float = 0.5,
):
    """
    Returns (points (n, 2), labels (n,)). A share `weight` of the mass sits on the upper moon.
    """
    if not 0.0 <= weight <= 1.0:
        raise ValueError(f'weight must lie in [0, 1], got {weight}.')
    rng = derive_rng(seed, 7003)
    n_upper = int(round(weight * n))
    theta = rng.uniform(0.0, np.pi, size=n)
    labels = (np.arange(n) >= n_upper).astype(int)

    x = np.where(labels == 0, radius * np.cos(theta), radius - radius * np.cos(theta))
    y = np.where(labels == 0, radius * np.sin(theta), radius - radius * np.sin(theta) - gap)
    pts = np.column_stack([x, y]) + noise * rng.standard_normal((n, 2))
    return pts + np.asarray(offset, dtype=float), labels


def classify_moons(points: np.ndarray, radius: float = 1.0, gap: float = 0.5, offset=(0.0, 0.0)) -> np.ndarray:
    """Nearest-moon label for planar points (distance to a dense sampling of each arc)."""
    theta = np.linspace(0.0, np.pi, 256)
    upper = np.column_stack([radius * np.cos(theta), radius * np.sin(theta)])
    lower = np.column_stack([radius - radius * np.cos(theta), radius - radius * np.sin(theta) - gap])
    pts = np.asarray(points, dtype=float) - np.asarray(offset, dtype=float)

    d_up = np.min(np.linalg.norm(pts[:, None, :] - upper[None], axis=2), axis=1)
    d_lo = np.min(np.linalg.norm(pts[:, None, :] - lower[None], axis=2), axis=1)
    return (d_lo < d_up).astype(int)


def build_embedded_moons(
    n: int,
    dim: int,
    seed: int,
    embedding: np.ndarray,
    radius: float = 1.0,
    gap: float = 0.5,
    noise: float = 0.05,
    offset=(0.0, 0.0),
    weight: float = 0.5,
    spread: float = None,
):
    """
    Double moons pushed through `embedding` (dim x 2) plus Gaussian scatter of std
    `spread` off the moon plane. `spread` defaults to `noise`.
    """
    pts, labels = build_double_moons(n, seed, radius, gap, noise, offset, weight)
    spread = noise if spread is None else float(spread)
    rng = derive_rng(seed, 7004)
    scatter = rng.standard_normal((n, dim))
    scatter -= (scatter @ embedding) @ embedding.T
    x = pts @ embedding.T + spread * scatter
    return Dataset(x), labels


# Circle pair sharing angles: source radius r0 at the origin, target radius r1 shifted by `center`
def build_circle_pair(
    n: int,
    dim: int,
    seed: int,
    embedding: np.ndarray,
    r0: float = 1.0,
    r1: float = 2.0,
    center=(1.5, -0.5),
    noise: float = 0.01,
):
    rng = derive_rng(seed, 7005)
    angles = rng.uniform(0.0, 2 * np.pi, size=n)
    ring = np.column_stack([np.cos(angles), np.sin(angles)])
    z0 = r0 * ring
    z1 = r1 * ring + np.asarray(center, dtype=float)

    eps0 = noise * rng.standard_normal((n, dim))
    eps1 = noise * rng.standard_normal((n, dim))
    return Dataset(z0 @ embedding.T + eps0), Dataset(z1 @ embedding.T + eps1), z1


def chain_mechanism(x0: np.ndarray, a: float = 1.0, b: float = 0.5) -> np.ndarray:
    """Row-wise a*sin(x_i) + b*tanh(x_{i-1}) with a zero left boundary."""
    left = np.zeros_like(x0)
    left[:, 1:] = x0[:, :-1]
    return a * np.sin(x0) + b * np.tanh(left)


def build_chain_pair(n: int, d: int, seed: int, noise_std: float = 0.1):
    """Full-rank chain: X0 ~ N(0, I_d), X1 = sin(X0) + 0.5 tanh(shifted X0) + noise."""
    rng = derive_rng(seed, 7006)
    x0 = rng.standard_normal((n, d))
    x1 = chain_mechanism(x0) + noise_std * rng.standard_normal((n, d))
    return Dataset(x0), Dataset(x1)
