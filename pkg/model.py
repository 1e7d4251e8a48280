"""
Model definitions: state spaces, generator collections, undirected graphs and
the model matrix A whose columns are the sufficient statistics T(x).

Column order is mixed-radix with the LAST variable varying fastest, so three
binary variables enumerate 000, 001, 010, ... and every downstream output
(bases, distributions, tables) is keyed on that order.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import NamedTuple

import networkx as nx
import pandas as pd

from services.errors import DomainError
from services.logger import setup_logger
logger = setup_logger(__name__)


class Variable(NamedTuple):
    name: str
    cardinality: int


@dataclass(frozen=True)
class StateSpace:
    variables: tuple

    def __post_init__(self):
        names = set()
        for var in self.variables:
            if var.cardinality < 2:
                raise DomainError(f"variable {var.name} has {var.cardinality} state(s); at least 2 required")
            if var.name in names:
                raise DomainError(f"variable {var.name} declared twice")
            names.add(var.name)

    @classmethod
    def of(cls, *pairs):
        """StateSpace.of(("X1", 2), ("X2", 3))"""
        return cls(tuple(Variable(name, int(card)) for name, card in pairs))

    @classmethod
    def binary(cls, n, prefix="X"):
        return cls.of(*[(f"{prefix}{i}", 2) for i in range(1, n + 1)])

    @cached_property
    def names(self):
        return tuple(var.name for var in self.variables)

    @cached_property
    def cardinalities(self):
        return tuple(var.cardinality for var in self.variables)

    @cached_property
    def m(self):
        total = 1
        for card in self.cardinalities:
            total *= card
        return total

    @cached_property
    def _positions(self):
        return {name: i for i, name in enumerate(self.names)}

    def position(self, name):
        try:
            return self._positions[name]
        except KeyError:
            raise DomainError(f"unknown variable {name}") from None

    def cardinality(self, name):
        return self.cardinalities[self.position(name)]

    def sort_names(self, names):
        """Order a collection of variable names by declaration order."""
        return tuple(sorted(names, key=self.position))

    def sub_space(self, names):
        return StateSpace(tuple(self.variables[self.position(n)] for n in names))

    def states(self):
        """All joint states in column order."""
        return product(*[range(card) for card in self.cardinalities])

    def index_of_state(self, state):
        return index_of_state(self, state)

    def state_of_index(self, index):
        return state_of_index(self, index)

    def label(self, index):
        state = self.state_of_index(index)
        if max(self.cardinalities, default=0) > 10:
            return ",".join(str(v) for v in state)
        return "".join(str(v) for v in state)

    def index_of_label(self, label):
        if "," in label or max(self.cardinalities, default=0) > 10:
            parts = label.split(",")
        else:
            parts = list(label)
        if len(parts) != len(self.variables):
            raise DomainError(f"state label {label!r} has {len(parts)} values, expected {len(self.variables)}")
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise DomainError(f"state label {label!r} is not numeric") from None
        return self.index_of_state(values)


def index_of_state(space, state):
    """Mixed-radix index of a joint state, last variable fastest."""
    if len(state) != len(space.variables):
        raise DomainError(f"state has {len(state)} values, expected {len(space.variables)}")
    index = 0
    for value, var in zip(state, space.variables):
        if not 0 <= value < var.cardinality:
            raise DomainError(f"value {value} out of range for variable {var.name} (cardinality {var.cardinality})")
        index = index * var.cardinality + value
    return index


def state_of_index(space, index):
    if not 0 <= index < space.m:
        raise DomainError(f"index {index} out of range for a state space of size {space.m}")
    values = []
    for card in reversed(space.cardinalities):
        index, value = divmod(index, card)
        values.append(value)
    return tuple(reversed(values))


@dataclass(frozen=True)
class GeneratorSet:
    generators: tuple

    def __post_init__(self):
        seen = set()
        for gen in self.generators:
            if not gen:
                raise DomainError("empty generator")
            key = frozenset(gen)
            if len(key) != len(gen):
                raise DomainError(f"generator {gen} repeats a variable")
            if key in seen:
                raise DomainError(f"duplicate generator {sorted(key)}")
            seen.add(key)

    @classmethod
    def of(cls, *gens):
        return cls(tuple(tuple(g) for g in gens))

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def validate(self, space):
        for gen in self.generators:
            for name in gen:
                space.position(name)


@dataclass(frozen=True)
class UndirectedGraph:
    vertices: tuple
    edges: frozenset

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise DomainError("duplicate vertex")
        known = set(self.vertices)
        for edge in self.edges:
            if len(edge) != 2:
                raise DomainError(f"edge {sorted(edge)} is a self-loop")
            for v in edge:
                if v not in known:
                    raise DomainError(f"edge references undeclared vertex {v}")

    @classmethod
    def of(cls, vertices, edges=()):
        return cls(tuple(vertices), frozenset(frozenset(e) for e in edges))

    def adjacent(self, a, b):
        return frozenset((a, b)) in self.edges

    def non_edges(self):
        """Unordered non-adjacent pairs in vertex order."""
        pairs = []
        for i, a in enumerate(self.vertices):
            for b in self.vertices[i + 1:]:
                if not self.adjacent(a, b):
                    pairs.append((a, b))
        return pairs

    def to_networkx(self):
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(tuple(e) for e in self.edges)
        return graph


@dataclass(frozen=True)
class ModelMatrix:
    entries: tuple
    row_labels: tuple
    column_labels: tuple
    space: StateSpace = None

    def __post_init__(self):
        width = len(self.column_labels)
        if len(self.entries) != len(self.row_labels):
            raise DomainError("row labels do not match the number of rows")
        for row in self.entries:
            if len(row) != width:
                raise DomainError("ragged model matrix")
            if any(a < 0 for a in row):
                raise DomainError("model matrix entries must be non-negative")
        for j in range(width):
            if all(row[j] == 0 for row in self.entries):
                raise DomainError(f"column {self.column_labels[j]} is all zero")

    @classmethod
    def from_rows(cls, rows, space=None):
        rows = tuple(tuple(int(a) for a in row) for row in rows)
        m = len(rows[0]) if rows else 0
        if space is not None:
            columns = tuple(space.label(j) for j in range(m))
        else:
            columns = tuple(str(j) for j in range(m))
        return cls(rows, tuple(f"t{i + 1}" for i in range(len(rows))), columns, space)

    @property
    def d(self):
        return len(self.entries)

    @property
    def m(self):
        return len(self.column_labels)

    def column(self, j):
        return tuple(row[j] for row in self.entries)

    @cached_property
    def column_supports(self):
        return tuple(frozenset(i for i, row in enumerate(self.entries) if row[j]) for j in range(self.m))

    @cached_property
    def column_sums(self):
        return tuple(sum(row[j] for row in self.entries) for j in range(self.m))

    def times(self, vector):
        """Exact A·v."""
        if len(vector) != self.m:
            raise DomainError(f"vector has length {len(vector)}, matrix has {self.m} columns")
        return tuple(sum(a * v for a, v in zip(row, vector) if a) for row in self.entries)

    def to_frame(self):
        return pd.DataFrame(list(self.entries), index=list(self.row_labels), columns=list(self.column_labels))


def maximal_cliques(graph):
    """
    All maximal cliques of the graph, each in vertex order, the list sorted
    lexicographically by vertex positions. Isolated vertices are singleton cliques.
    """
    position = {v: i for i, v in enumerate(graph.vertices)}
    cliques = []
    for clique in nx.find_cliques(graph.to_networkx()):
        cliques.append(tuple(sorted(clique, key=position.__getitem__)))
    cliques.sort(key=lambda c: [position[v] for v in c])
    return GeneratorSet(tuple(cliques))


def loglinear_matrix(space, gens):
    """
    0/1 matrix with one row per (generator, local state). Blocks follow the
    generator order; inside a block local states are mixed-radix.
    """
    if len(gens) == 0:
        raise DomainError("a log-linear model needs at least one generator")
    gens.validate(space)

    states = list(space.states())
    rows, labels = [], []
    for gen in gens:
        positions = [space.position(name) for name in gen]
        local = space.sub_space(gen)
        block = [[0] * space.m for _ in range(local.m)]
        for j, state in enumerate(states):
            block[local.index_of_state([state[p] for p in positions])][j] = 1
        rows.extend(block)
        name = ",".join(gen)
        labels.extend(f"{{{name}}}={local.label(k)}" for k in range(local.m))

    logger.debug(f"Built {len(rows)}x{space.m} log-linear matrix for {len(gens)} generators")
    return ModelMatrix(
        tuple(tuple(r) for r in rows),
        tuple(labels),
        tuple(space.label(j) for j in range(space.m)),
        space,
    )


def graph_matrix(space, graph):
    if set(graph.vertices) != set(space.names):
        raise DomainError(f"graph vertices {sorted(graph.vertices)} do not match variables {sorted(space.names)}")
    return loglinear_matrix(space, maximal_cliques(graph))


@dataclass(frozen=True)
class ModelSpec:
    """A parsed model file: a state space plus either a graph or generators."""
    space: StateSpace
    graph: UndirectedGraph = None
    generators: GeneratorSet = None

    @property
    def is_graphical(self):
        return self.graph is not None

    def matrix(self):
        if self.graph is not None:
            return graph_matrix(self.space, self.graph)
        return loglinear_matrix(self.space, self.generators)
