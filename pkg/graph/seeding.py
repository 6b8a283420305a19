import numpy as np

# Stream tags keep the per-purpose generators of one node apart.
NOISE_STREAM = 0
SOURCE_STREAM = 1
TRAIN_STREAM = 2
SDE_STREAM = 3


def derive_seed(seed: int, *keys: int) -> int:
    """Deterministic child seed for (master seed, key path)."""
    seq = np.random.SeedSequence([int(seed), *(int(k) for k in keys)])
    return int(seq.generate_state(1, dtype=np.uint32)[0])


def derive_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), *(int(k) for k in keys)]))
