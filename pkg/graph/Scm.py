import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping
import numpy as np

from errors import ConfigError, DimensionMismatch
from data.Dataset import Dataset
from .Dag import Dag, topological_layers
from .Mechanism import Mechanism
from .seeding import NOISE_STREAM, derive_rng


@dataclass(frozen=True)
class Scm:
    """
    Structural causal model: a Dag plus one Mechanism per node.
    Immutable; interventions return a new model.
    """
    dag: Dag
    mechanisms: tuple

    def __post_init__(self):
        object.__setattr__(self, 'mechanisms', tuple(self.mechanisms))
        if len(self.mechanisms) != self.dag.node_count:
            raise DimensionMismatch(
                f'{len(self.mechanisms)} mechanisms for {self.dag.node_count} nodes.'
            )
        for i, mech in enumerate(self.mechanisms):
            try:
                mech.check_arity(len(self.dag.parents(i)))
            except DimensionMismatch as exc:
                raise DimensionMismatch(f'node {self.dag.names[i]}: {exc}') from exc

    @property
    def node_count(self) -> int:
        return self.dag.node_count

    @property
    def names(self) -> tuple:
        return self.dag.names

    def sample(self, n: int, seed: int) -> Dataset:
        """
        Ancestral sampling. Node i draws its noise from the stream (seed, i), so two
        models that share a node's mechanism and parents also share its noise.
        """
        if n < 1:
            raise ValueError(f'n must be >= 1, got {n}.')
        x = np.zeros((n, self.node_count))
        for layer in topological_layers(self.dag):
            for i in layer:
                noise = derive_rng(seed, NOISE_STREAM, i).standard_normal(n)
                parents = list(self.dag.parents(i))
                x[:, i] = self.mechanisms[i].evaluate(x[:, parents], noise)
        return Dataset(x, self.names)

    def intervene(self, assignments: Mapping) -> 'Scm':
        """do(node = value, ...): constant mechanisms and severed incoming edges."""
        targets = {self.dag.index(k): float(v) for k, v in assignments.items()}
        dag = self.dag.without_incoming(targets)
        mechs = list(self.mechanisms)
        for i, value in targets.items():
            mechs[i] = Mechanism.constant(value)
        return Scm(dag, tuple(mechs))

    def analytic_moments(self):
        """
        Mean vector and covariance for models built only from linear/constant mechanisms.
        """
        d = self.node_count
        B = np.zeros((d, d))
        c = np.zeros(d)
        D = np.zeros(d)
        for i, mech in enumerate(self.mechanisms):
            if not mech.is_linear_gaussian:
                raise ValueError(f'node {self.names[i]} has a {mech.kind} mechanism; moments are not closed-form.')
            coef = np.asarray(mech.coefficients)
            if mech.kind == 'constant':
                c[i] = coef[0]
                continue
            for w, p in zip(coef[:-1], self.dag.parents(i)):
                B[i, p] = w
            c[i] = coef[-1]
            D[i] = mech.noise_std
        A = np.linalg.inv(np.eye(d) - B)
        mean = A @ c
        cov = A @ np.diag(D ** 2) @ A.T
        return mean, cov

    def to_dict(self) -> dict:
        nodes = []
        for i, name in enumerate(self.names):
            nodes.append({
                'name': name,
                'parents': [self.names[p] for p in self.dag.parents(i)],
                'mechanism': self.mechanisms[i].to_dict(),
            })
        return {'nodes': nodes}

    @classmethod
    def from_dict(cls, spec: dict) -> 'Scm':
        try:
            nodes = spec['nodes']
            names = [str(node['name']) for node in nodes]
            index = {name: i for i, name in enumerate(names)}
            edges = []
            for i, node in enumerate(nodes):
                for p in node.get('parents', []):
                    if p not in index:
                        raise ConfigError(f'node {node["name"]}: unknown parent {p!r}.')
                    edges.append((index[p], i))
            mechs = [Mechanism.from_dict(node['mechanism']) for node in nodes]
        except (KeyError, TypeError) as exc:
            raise ConfigError(f'Malformed SCM spec: {exc}') from exc
        return cls(Dag(len(names), tuple(edges), tuple(names)), tuple(mechs))

    def to_json(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2))

    @classmethod
    def from_json(cls, path) -> 'Scm':
        try:
            spec = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f'{path}: invalid JSON ({exc}).') from exc
        return cls.from_dict(spec)
