"""Shared models and reference binomials for the test suite."""

import os
import sys
from fractions import Fraction
from functools import lru_cache

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.append(ROOT)
DATA_DIR = os.path.join(ROOT, "data")

from ideal import parse_binomial, toric_markov_basis
from model import GeneratorSet, StateSpace, UndirectedGraph, graph_matrix, loglinear_matrix

BINARY3 = StateSpace.binary(3)
BINARY4 = StateSpace.binary(4)

FOUR_CYCLE = UndirectedGraph.of(
    ("X1", "X2", "X3", "X4"),
    [("X1", "X2"), ("X2", "X3"), ("X3", "X4"), ("X1", "X4")],
)
CHAIN = UndirectedGraph.of(("X1", "X2", "X3"), [("X1", "X2"), ("X2", "X3")])
NO_THREE_WAY = GeneratorSet.of(("X1", "X2"), ("X2", "X3"), ("X1", "X3"))

# the eight quadrics of the binary four-cycle's pairwise ideal
FOUR_CYCLE_QUADRICS = (
    "+ p1011 p1110 - p1010 p1111",
    "+ p0111 p1101 - p0101 p1111",
    "+ p1001 p1100 - p1000 p1101",
    "+ p0110 p1100 - p0100 p1110",
    "+ p0011 p1001 - p0001 p1011",
    "+ p0011 p0110 - p0010 p0111",
    "+ p0001 p0100 - p0000 p0101",
    "+ p0010 p1000 - p0000 p1010",
)

# X2 _||_ X4 | X1,X3
X2_X4_QUADRICS = (
    "+ p1011 p1110 - p1010 p1111",
    "+ p1001 p1100 - p1000 p1101",
    "+ p0001 p0100 - p0000 p0101",
    "+ p0011 p0110 - p0010 p0111",
)

# the eight quartics completing the four-cycle Markov basis
FOUR_CYCLE_QUARTICS = {
    "f12diff": "+ p0100 p0111 p1001 p1010 - p0101 p0110 p1000 p1011",
    "f23diff": "+ p0010 p0101 p1011 p1100 - p0011 p0100 p1010 p1101",
    "f34diff": "+ p0001 p0110 p1010 p1101 - p0010 p0101 p1001 p1110",
    "f14diff": "+ p0001 p0111 p1010 p1100 - p0011 p0101 p1000 p1110",
    "f12same": "+ p0000 p0011 p1101 p1110 - p0001 p0010 p1100 p1111",
    "f23same": "+ p0000 p0111 p1001 p1110 - p0001 p0110 p1000 p1111",
    "f34same": "+ p0000 p0111 p1011 p1100 - p0011 p0100 p1000 p1111",
    "f14same": "+ p0000 p0110 p1011 p1101 - p0010 p0100 p1001 p1111",
}

NO_THREE_WAY_QUARTIC = "+ p000 p011 p101 p110 - p001 p010 p100 p111"

# pairs of (X, Y | Z) CPR specs whose ratio is identically one on the four-cycle
FOUR_CYCLE_CPR_RATIOS = [
    (f"X=X3:0/1;Y=X4:0/1;Z=X1,X2:{a}", f"X=X3:0/1;Y=X4:0/1;Z=X1,X2:{b}") for a, b in (("01", "10"), ("00", "11"))
] + [
    (f"X=X1:0/1;Y=X4:0/1;Z=X2,X3:{a}", f"X=X1:0/1;Y=X4:0/1;Z=X2,X3:{b}") for a, b in (("01", "10"), ("00", "11"))
] + [
    (f"X=X1:0/1;Y=X2:0/1;Z=X3,X4:{a}", f"X=X1:0/1;Y=X2:0/1;Z=X3,X4:{b}") for a, b in (("01", "10"), ("00", "11"))
] + [
    (f"X=X2:0/1;Y=X3:0/1;Z=X1,X4:{a}", f"X=X2:0/1;Y=X3:0/1;Z=X1,X4:{b}") for a, b in (("01", "10"), ("00", "11"))
]


def data_path(name):
    return os.path.join(DATA_DIR, name)


def parse_all(lines, space=BINARY4):
    return [parse_binomial(line, space) for line in lines]


def four_cycle_matrix():
    return graph_matrix(BINARY4, FOUR_CYCLE)


def chain_matrix():
    return graph_matrix(BINARY3, CHAIN)


def no_three_way_matrix():
    return loglinear_matrix(BINARY3, NO_THREE_WAY)


@lru_cache(maxsize=None)
def four_cycle_basis():
    return toric_markov_basis(four_cycle_matrix())


@lru_cache(maxsize=None)
def chain_basis():
    return toric_markov_basis(chain_matrix())


def random_parameters(rng, d, allow_zero=False):
    low = 0 if allow_zero else 1
    return tuple(Fraction(rng.randint(low, 9), rng.randint(1, 9)) for _ in range(d))


def same_up_to_sign(a, b):
    """Set equality of binomial collections, ignoring orientation."""
    def canon(items):
        return {x.oriented() for x in items}
    return canon(a) == canon(b)
