from .Dataset import Dataset
from .loader import DatasetLoader, read_f32, write_f32
from .benchmarks import (
    build_latent_source,
    build_double_moons,
    build_embedded_moons,
    build_circle_pair,
    build_chain_pair,
    classify_moons,
    chain_mechanism,
    random_embedding
)
