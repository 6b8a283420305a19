from .Dag import Dag, topological_layers, descendants
from .Mechanism import Mechanism
from .Scm import Scm
from .seeding import derive_rng, derive_seed
from .families import (
    confounder_scm,
    confounder_dag,
    markov_chain_scm,
    sin_tanh_chain_scm,
    empty_scm,
    FAMILIES
)
