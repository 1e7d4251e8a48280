import unittest
from itertools import combinations_with_replacement, product
import sys
import os

# Add parent dir to path to import modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import networkx as nx

from fiber import Table, WalkConfig, apply_move, connectivity_check, enumerate_fiber, random_walk, walk_trace
from fixtures import (
    BINARY3, BINARY4, FOUR_CYCLE_QUADRICS, FOUR_CYCLE_QUARTICS, NO_THREE_WAY_QUARTIC, chain_basis, chain_matrix,
    data_path, four_cycle_basis, four_cycle_matrix, no_three_way_matrix, parse_all,
)
from ideal import Binomial, IdealBasis, MonomialOrder, parse_binomial
from model import StateSpace, UndirectedGraph, graph_matrix
from services.errors import DomainError, ResourceError
from services.loaders import load_table

RUN_SLOW = os.environ.get("TORIC_RUN_SLOW") == "1"

INDEPENDENCE = StateSpace.binary(2)


def _tables(m, total):
    for cells in combinations_with_replacement(range(m), total):
        counts = [0] * m
        for j in cells:
            counts[j] += 1
        yield tuple(counts)


def _component_excess(A, moves, total):
    """Connected components of the move graph on all tables of a given total, minus the number of fibers."""
    graph = nx.Graph()
    tables = list(_tables(A.m, total))
    graph.add_nodes_from(tables)
    for counts in tables:
        table = Table(counts)
        for b in moves:
            for direction in (1, -1):
                moved = apply_move(table, b, direction)
                if moved is not None:
                    graph.add_edge(counts, moved.counts)
    fibers = {A.times(counts) for counts in tables}
    return nx.number_connected_components(graph) - len(fibers)


class TestMoves(unittest.TestCase):

    def test_valid_move_keeps_statistics(self):
        A = four_cycle_matrix()
        n = Table((1,) * 16, BINARY4)
        b = parse_binomial(FOUR_CYCLE_QUADRICS[0], BINARY4)
        moved = apply_move(n, b, 1)
        self.assertIsNotNone(moved)
        self.assertEqual(A.times(moved.counts), A.times(n.counts))
        self.assertEqual(moved.total, 16)

    def test_rejected_move(self):
        n = Table(tuple(int(j == 0) for j in range(16)), BINARY4)
        b = parse_binomial(FOUR_CYCLE_QUADRICS[0], BINARY4)
        self.assertIsNone(apply_move(n, b, 1))
        self.assertIsNone(apply_move(n, b, -1))

    def test_bad_direction(self):
        with self.assertRaises(DomainError):
            apply_move(Table((1, 1)), Binomial((1, 0), (0, 1)), 2)

    def test_length_mismatch_rejected(self):
        with self.assertRaises(DomainError):
            apply_move(Table((1, 1, 1)), Binomial((1, 0), (0, 1)), 1)

    def test_negative_count_rejected(self):
        with self.assertRaises(DomainError):
            Table((1, -1))


class TestRandomWalk(unittest.TestCase):

    def test_deterministic(self):
        n0 = load_table(data_path("chain_ones.table"), BINARY3)
        cfg = WalkConfig(steps=500, seed=42)
        self.assertEqual(random_walk(n0, chain_basis(), cfg), random_walk(n0, chain_basis(), cfg))

    def test_all_moves_rejected(self):
        n0 = Table(tuple(int(j == 0) for j in range(8)), BINARY3)
        self.assertEqual(random_walk(n0, chain_basis(), WalkConfig(steps=100, seed=1)), n0)

    def test_statistics_preserved(self):
        A = chain_matrix()
        n0 = load_table(data_path("chain_ones.table"), BINARY3)
        target = A.times(n0.counts)
        for table in walk_trace(n0, chain_basis(), WalkConfig(steps=10_000, seed=3)):
            self.assertEqual(A.times(table.counts), target)

    def test_trace_length(self):
        n0 = load_table(data_path("chain_ones.table"), BINARY3)
        trace = list(walk_trace(n0, chain_basis(), WalkConfig(steps=5000, seed=0)))
        self.assertEqual(len(trace), 5000)

    def test_lazy_walk_balance(self):
        """Verify the two-table fiber is visited evenly (lazy walk, five-sigma band)."""
        A = graph_matrix(INDEPENDENCE, UndirectedGraph.of(INDEPENDENCE.names))
        n0 = load_table(data_path("independence_unit.table"), INDEPENDENCE)
        basis = IdealBasis.build([parse_binomial("p00 p11 - p01 p10", INDEPENDENCE)], MonomialOrder.grevlex(4))
        self.assertEqual(len(enumerate_fiber(n0, A)), 2)
        steps = 100_000
        visits = sum(1 for table in walk_trace(n0, basis, WalkConfig(steps=steps, seed=2024)) if table == n0)
        self.assertLess(abs(visits - steps / 2), 790)

    def test_config_validation(self):
        with self.assertRaises(DomainError):
            WalkConfig(steps=0)
        with self.assertRaises(DomainError):
            WalkConfig(seed=-1)


class TestFiberEnumeration(unittest.TestCase):

    def test_unit_table_fiber_is_singleton(self):
        n0 = Table(tuple(int(j == 0) for j in range(16)), BINARY4)
        self.assertEqual(enumerate_fiber(n0, four_cycle_matrix()), [n0])

    def test_matches_brute_force(self):
        A = chain_matrix()
        n0 = Table(tuple(int(j in (0, 7)) for j in range(8)), BINARY3)
        target = A.times(n0.counts)
        expected = {c for c in _tables(8, 2) if A.times(c) == target}
        self.assertEqual({t.counts for t in enumerate_fiber(n0, A)}, expected)

    def test_cap(self):
        n0 = load_table(data_path("chain_ones.table"), BINARY3)
        with self.assertRaises(ResourceError):
            enumerate_fiber(n0, chain_matrix(), cap=1)


class TestConnectivity(unittest.TestCase):

    def test_singleton_fiber(self):
        n0 = Table(tuple(int(j == 0) for j in range(16)), BINARY4)
        self.assertTrue(connectivity_check(n0, four_cycle_basis(), four_cycle_matrix()))

    def test_independence_fiber(self):
        A = graph_matrix(INDEPENDENCE, UndirectedGraph.of(INDEPENDENCE.names))
        n0 = load_table(data_path("independence_unit.table"), INDEPENDENCE)
        basis = [parse_binomial("p00 p11 - p01 p10", INDEPENDENCE)]
        self.assertTrue(connectivity_check(n0, basis, A))

    def test_quadrics_alone_disconnect_a_quartic_fiber(self):
        quartic = parse_binomial(FOUR_CYCLE_QUARTICS["f12diff"], BINARY4)
        n0 = Table(quartic.plus, BINARY4)
        A = four_cycle_matrix()
        self.assertFalse(connectivity_check(n0, parse_all(FOUR_CYCLE_QUADRICS), A))
        self.assertTrue(connectivity_check(n0, four_cycle_basis(), A))

    def test_move_outside_kernel_rejected(self):
        n0 = Table(tuple(int(j == 0) for j in range(16)), BINARY4)
        with self.assertRaises(DomainError):
            connectivity_check(n0, [parse_binomial("p0000 - p1111", BINARY4)], four_cycle_matrix())

    def test_markov_basis_connects_small_fibers(self):
        """Verify every four-cycle fiber of total up to four is connected by the Markov basis."""
        A = four_cycle_matrix()
        for total in (2, 3, 4, 5):
            self.assertEqual(_component_excess(A, four_cycle_basis(), total), 0, total)
        self.assertGreater(_component_excess(A, parse_all(FOUR_CYCLE_QUADRICS), 4), 0)

    @unittest.skipUnless(RUN_SLOW, "set TORIC_RUN_SLOW=1 for four-cycle tables of total six")
    def test_four_cycle_total_six(self):
        self.assertEqual(_component_excess(four_cycle_matrix(), four_cycle_basis(), 6), 0)

    def test_chain_all_totals(self):
        """Verify the chain basis connects every fiber of total up to six."""
        A = chain_matrix()
        for total in range(1, 7):
            self.assertEqual(_component_excess(A, chain_basis(), total), 0, total)

    def test_no_three_way_all_totals(self):
        """Verify the single quartic connects every no-three-way fiber of total up to six."""
        A = no_three_way_matrix()
        basis = parse_all([NO_THREE_WAY_QUARTIC], BINARY3)
        for total in range(1, 7):
            self.assertEqual(_component_excess(A, basis, total), 0, total)
        quartic = basis[0]
        self.assertTrue(connectivity_check(Table(quartic.plus, BINARY3), basis, A))
        self.assertEqual(len(enumerate_fiber(Table(quartic.plus, BINARY3), A)), 2)

    def test_chain_fibers(self):
        A = chain_matrix()
        for total in (1, 2, 3):
            for counts in product(range(2), repeat=8):
                if sum(counts) != total:
                    continue
                self.assertTrue(connectivity_check(Table(counts, BINARY3), chain_basis(), A))


if __name__ == '__main__':
    unittest.main()
