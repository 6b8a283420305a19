from dataclasses import dataclass
from typing import Optional
import networkx as nx

from errors import CycleDetected, UnknownNode


@dataclass(frozen=True)
class Dag:
    """
    Directed acyclic graph over integer nodes 0..node_count-1.

    Parameters:
    - node_count: number of nodes
    - edges: sequence of (parent_index, child_index); the order in which a child's
             edges appear is the order of its parent list
    - node_names: optional display names, one per node
    """
    node_count: int
    edges: tuple = ()
    node_names: Optional[tuple] = None

    def __post_init__(self):
        edges = tuple((int(p), int(c)) for p, c in self.edges)
        object.__setattr__(self, 'edges', edges)
        if self.node_names is not None:
            names = tuple(str(n) for n in self.node_names)
            if len(names) != self.node_count:
                raise ValueError(f'Expected {self.node_count} node names, got {len(names)}.')
            if len(set(names)) != len(names):
                raise ValueError('Node names must be unique.')
            object.__setattr__(self, 'node_names', names)

        seen = set()
        for p, c in edges:
            if not (0 <= p < self.node_count and 0 <= c < self.node_count):
                raise UnknownNode(f'Edge {p}->{c} references a node outside [0, {self.node_count}).')
            if p == c:
                raise CycleDetected(f'Self-edge on node {p}.')
            if (p, c) in seen:
                raise ValueError(f'Duplicate edge {p}->{c}.')
            seen.add((p, c))

        g = nx.DiGraph()
        g.add_nodes_from(range(self.node_count))
        g.add_edges_from(edges)
        if not nx.is_directed_acyclic_graph(g):
            raise CycleDetected(f'Graph with edges {list(edges)} has a cycle.')
        object.__setattr__(self, '_graph', g)

        parents = [[] for _ in range(self.node_count)]
        for p, c in edges:
            parents[c].append(p)
        object.__setattr__(self, '_parents', tuple(tuple(ps) for ps in parents))

    @property
    def names(self) -> tuple:
        if self.node_names is not None:
            return self.node_names
        return tuple(f'x{i}' for i in range(self.node_count))

    @property
    def graph(self) -> nx.DiGraph:
        return self._graph.copy()

    def parents(self, node: int) -> tuple:
        self._check_node(node)
        return self._parents[node]

    def children(self, node: int) -> tuple:
        self._check_node(node)
        return tuple(sorted(self._graph.successors(node)))

    def index(self, key) -> int:
        """Resolve a node name or integer index."""
        if isinstance(key, str):
            names = self.names
            if key in names:
                return names.index(key)
            if key.isdigit() and int(key) < self.node_count:
                return int(key)
            raise UnknownNode(f'Unknown node {key!r}; known nodes: {list(names)}.')
        self._check_node(key)
        return int(key)

    def without_incoming(self, targets) -> 'Dag':
        targets = set(targets)
        kept = [(p, c) for p, c in self.edges if c not in targets]
        return Dag(self.node_count, tuple(kept), self.node_names)

    def _check_node(self, node):
        if not isinstance(node, (int,)) and not hasattr(node, '__index__'):
            raise UnknownNode(f'Node {node!r} is not an index.')
        if not 0 <= int(node) < self.node_count:
            raise UnknownNode(f'Node {node} outside [0, {self.node_count}).')


def topological_layers(dag: Dag) -> list:
    """Earliest-legal-layer ordering: each node sits one layer after its deepest parent."""
    try:
        return [sorted(layer) for layer in nx.topological_generations(dag._graph)]
    except nx.NetworkXUnfeasible as exc:
        raise CycleDetected(str(exc)) from exc


def descendants(dag: Dag, node: int) -> set:
    dag._check_node(node)
    return set(nx.descendants(dag._graph, int(node)))
