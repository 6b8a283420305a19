import numpy as np

from .Dag import Dag
from .Mechanism import Mechanism
from .Scm import Scm


def confounder_scm(noise_std: float = 0.3) -> Scm:
    """Fork Y <- X -> Z with X ~ N(0,1), Y = 2X + e, Z = 2X + e."""
    dag = Dag(3, ((0, 1), (0, 2)), ('X', 'Y', 'Z'))
    mechs = (
        Mechanism('linear', (0.0,), 1.0),
        Mechanism('linear', (2.0, 0.0), noise_std),
        Mechanism('linear', (2.0, 0.0), noise_std),
    )
    return Scm(dag, mechs)


def confounder_dag(reversed_edge: bool = False) -> Dag:
    """The confounder graph, or the misspecified Y -> X -> Z variant."""
    if reversed_edge:
        return Dag(3, ((1, 0), (0, 2)), ('X', 'Y', 'Z'))
    return Dag(3, ((0, 1), (0, 2)), ('X', 'Y', 'Z'))


def markov_chain_scm(d: int, coefficient: float = 0.8) -> Scm:
    """Stationary AR(1) chain x_i = a x_{i-1} + e_i with unit marginal variance."""
    if not -1.0 < coefficient < 1.0:
        raise ValueError('coefficient must lie in (-1, 1) for a stationary chain.')
    noise = float(np.sqrt(1.0 - coefficient ** 2))
    edges = tuple((i - 1, i) for i in range(1, d))
    mechs = [Mechanism('linear', (0.0,), 1.0)]
    mechs += [Mechanism('linear', (coefficient, 0.0), noise) for _ in range(1, d)]
    return Scm(Dag(d, edges), tuple(mechs))


def sin_tanh_chain_scm(d: int, noise_std: float = 0.1) -> Scm:
    """
    2d nodes: roots a_0..a_{d-1} ~ N(0,1) and b_i = sin(a_i) + 0.5 tanh(a_{i-1}) + e.
    Node b_0 has no left neighbour; its missing term is zero.
    """
    names = tuple(f'a{i}' for i in range(d)) + tuple(f'b{i}' for i in range(d))
    edges = []
    for i in range(d):
        edges.append((i, d + i))
        if i > 0:
            edges.append((i - 1, d + i))
    mechs = [Mechanism('linear', (0.0,), 1.0) for _ in range(d)]
    mechs += [Mechanism('sin_tanh_chain', (1.0, 0.5), noise_std) for _ in range(d)]
    return Scm(Dag(2 * d, tuple(edges), names), tuple(mechs))


def empty_scm(d: int) -> Scm:
    return Scm(Dag(d), tuple(Mechanism('linear', (0.0,), 1.0) for _ in range(d)))


FAMILIES = {
    'confounder': lambda d=3: confounder_scm(),
    'markov_chain': markov_chain_scm,
    'sin_tanh_chain': sin_tanh_chain_scm,
    'empty': empty_scm,
}
