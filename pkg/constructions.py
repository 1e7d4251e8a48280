"""
The "n non-interacting pairs" graphical models and their parity binomials.

pairs_model(n) is the complete graph on X1..X2n with the n edges
{Xi, X(i+n)} removed: the four-cycle for n = 2, the octahedron for n = 3.
parity_binomial(n) is a degree-2^n element of its toric ideal, showing that
Markov bases of these models need generators of unbounded degree.
"""

from dataclasses import dataclass

import pandas as pd

from ideal import Binomial, parse_binomial, render_binomial
from model import ModelSpec, StateSpace, UndirectedGraph, graph_matrix
from services import settings
from services.errors import DomainError, ResourceError
from services.logger import setup_logger
logger = setup_logger(__name__)

# the n = 3 instance as printed, one line per row, left and right of the '-'
PRINTED_OCTAHEDRON_LINES = (
    "p000000 p000101 p010001 p010100 - p101011 p101110 p111010 p111111",
    "p000001 p000100 p010000 p010101 - p101010 p101111 p111011 p111110",
)


@dataclass(frozen=True)
class PairsModel:
    n: int
    graph: UndirectedGraph
    A: object
    space: StateSpace

    def __post_init__(self):
        expected = {frozenset((f"X{i}", f"X{i + self.n}")) for i in range(1, self.n + 1)}
        if set(map(frozenset, self.graph.non_edges())) != expected:
            raise DomainError("pairs model graph must miss exactly the edges {Xi, X(i+n)}")

    @property
    def spec(self):
        return ModelSpec(self.space, graph=self.graph)


def _check_size(n):
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    if 2 ** (2 * n) > settings.MAX_STATES:
        raise ResourceError(f"2^{2 * n} states exceeds the bound of {settings.MAX_STATES}")


def pairs_model(n):
    _check_size(n)
    space = StateSpace.binary(2 * n)
    names = space.names
    edges = [
        (a, b)
        for i, a in enumerate(names)
        for j, b in enumerate(names)
        if i < j and j - i != n
    ]
    graph = UndirectedGraph.of(names, edges)
    logger.info(f"Pairs model n={n}: {len(edges)} edges on {2 * n} binary variables")
    return PairsModel(n, graph, graph_matrix(space, graph), space)


def parity_binomial(n):
    """
    plus: states with i1 = i3 = ... = i(2n-1) and i1 = i2 + i4 + ... + i2n (mod 2);
    minus: same odd positions, opposite parity.
    """
    _check_size(n)
    space = StateSpace.binary(2 * n)
    plus, minus = [0] * space.m, [0] * space.m
    for j, state in enumerate(space.states()):
        odds, evens = state[0::2], state[1::2]
        if len(set(odds)) != 1:
            continue
        if sum(evens) % 2 == odds[0]:
            plus[j] = 1
        else:
            minus[j] = 1
    return Binomial(tuple(plus), tuple(minus))


def verify_kernel_membership(b, A):
    if b.m != A.m:
        raise DomainError(f"binomial has {b.m} variables, matrix has {A.m} columns")
    return A.times(b.plus) == A.times(b.minus)


def printed_octahedron_lines():
    space = StateSpace.binary(6)
    return [parse_binomial(line, space) for line in PRINTED_OCTAHEDRON_LINES]


def printed_lines_report():
    """
    Kernel membership of the printed n = 3 lines under each reading: each line
    as its own binomial, and both left halves against both right halves.
    """
    model = pairs_model(3)
    first, second = printed_octahedron_lines()
    construction = parity_binomial(3)
    readings = [
        ("first line", first),
        ("second line", second),
        ("first line against second line", Binomial(
            tuple(a + b for a, b in zip(first.plus, first.minus)),
            tuple(a + b for a, b in zip(second.plus, second.minus)),
        )),
    ]
    rows = []
    for name, b in readings:
        rows.append({
            "reading": name,
            "binomial": render_binomial(b, model.space),
            "degree": b.degree,
            "in_kernel": verify_kernel_membership(b, model.A),
            "matches_construction": b.same_up_to_sign(construction),
        })
    return pd.DataFrame(rows)
