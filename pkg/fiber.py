"""
Markov moves on contingency tables.

A Markov basis of I_A is a complete move set: adding +/-(plus - minus) keeps
A n fixed, and the basis connects every fiber {n >= 0 : A n = A n0}.
"""

from dataclasses import dataclass

import networkx as nx
import numpy as np
import pandas as pd

from services import settings
from services.errors import DomainError, ResourceError
from services.logger import setup_logger
logger = setup_logger(__name__)

# draws per refill of the random stream
CHUNK = 4096


@dataclass(frozen=True)
class Table:
    counts: tuple
    space: object = None

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        object.__setattr__(self, "counts", counts)
        if self.space is not None and len(counts) != self.space.m:
            raise DomainError(f"table has {len(counts)} cells, state space has {self.space.m}")
        if any(c < 0 for c in counts):
            raise DomainError("negative count in table")

    @property
    def total(self):
        return sum(self.counts)

    def to_frame(self):
        labels = [self.space.label(j) if self.space is not None else str(j) for j in range(len(self.counts))]
        return pd.DataFrame({"state": labels, "count": list(self.counts)})


@dataclass(frozen=True)
class WalkConfig:
    steps: int = settings.DEFAULT_WALK_STEPS
    seed: int = settings.DEFAULT_WALK_SEED

    def __post_init__(self):
        if self.steps < 1:
            raise DomainError("a walk needs at least one step")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must be an unsigned 64-bit integer")


def apply_move(n, b, direction):
    """n + direction * (plus - minus), or None when a count would go negative."""
    if direction not in (1, -1):
        raise DomainError("move direction must be +1 or -1")
    if b.m != len(n.counts):
        raise DomainError(f"move has {b.m} variables, table has {len(n.counts)} cells")
    counts = []
    for c, u, v in zip(n.counts, b.plus, b.minus):
        value = c + direction * (u - v)
        if value < 0:
            return None
        counts.append(value)
    return Table(tuple(counts), n.space)


def walk_trace(n0, basis, cfg):
    """
    Lazy uniform walk: each step draws a basis element and a sign from a PCG64
    stream seeded with cfg.seed and stays put when the move is rejected.
    Yields the table after every step.
    """
    moves = list(basis)
    rng = np.random.default_rng(cfg.seed)
    current = n0
    accepted = 0
    done = 0
    while done < cfg.steps:
        size = min(CHUNK, cfg.steps - done)
        if moves:
            picks = rng.integers(0, len(moves), size=size)
            signs = rng.integers(0, 2, size=size)
        for k in range(size):
            if moves:
                moved = apply_move(current, moves[picks[k]], 1 if signs[k] else -1)
                if moved is not None:
                    current = moved
                    accepted += 1
            yield current
        done += size
    logger.debug(f"Walk finished: {cfg.steps} steps, {accepted} accepted moves")


def random_walk(n0, basis, cfg):
    current = n0
    for current in walk_trace(n0, basis, cfg):
        pass
    return current


def enumerate_fiber(n0, A, cap=None):
    """All non-negative integer tables with the statistics of n0, by bounded backtracking."""
    cap = settings.FIBER_CAP if cap is None else cap
    if len(n0.counts) != A.m:
        raise DomainError(f"table has {len(n0.counts)} cells, matrix has {A.m} columns")
    target = list(A.times(n0.counts))
    columns = [A.column(j) for j in range(A.m)]

    # rows still reachable from column k onwards
    reachable = [set() for _ in range(A.m + 1)]
    for k in range(A.m - 1, -1, -1):
        reachable[k] = reachable[k + 1] | A.column_supports[k]

    found = []
    counts = [0] * A.m

    def search(k, remaining):
        if any(r and i not in reachable[k] for i, r in enumerate(remaining)):
            return
        if k == A.m:
            found.append(Table(tuple(counts), n0.space))
            if len(found) > cap:
                raise ResourceError(f"fiber has more than {cap} tables")
            return
        column = columns[k]
        limit = min(remaining[i] // a for i, a in enumerate(column) if a)
        for c in range(limit + 1):
            counts[k] = c
            search(k + 1, [r - c * a for r, a in zip(remaining, column)])
        counts[k] = 0

    search(0, target)
    logger.debug(f"Fiber of a table with total {n0.total}: {len(found)} tables")
    return found


def connectivity_check(n0, basis, A, cap=None):
    """True iff the basis moves connect the whole fiber of n0."""
    fiber = enumerate_fiber(n0, A, cap)
    index = {table.counts: k for k, table in enumerate(fiber)}
    graph = nx.Graph()
    graph.add_nodes_from(range(len(fiber)))
    for k, table in enumerate(fiber):
        for b in basis:
            for direction in (1, -1):
                moved = apply_move(table, b, direction)
                if moved is None:
                    continue
                if moved.counts not in index:
                    raise DomainError("a basis move leaves the fiber; the basis is not in ker A")
                graph.add_edge(k, index[moved.counts])
    connected = nx.is_connected(graph)
    if not connected:
        logger.info(f"Fiber of size {len(fiber)} splits into {nx.number_connected_components(graph)} components")
    return connected
