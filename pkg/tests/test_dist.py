import unittest
from fractions import Fraction
from itertools import product
import random
import sys
import os

# Add parent dir to path to import modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import numpy as np

from dist import (
    Distribution, FactorizationVerdict, ParameterVector, RecoveryFailure, Status,
    classify, is_nice, normalize, phi, recover_parameters, support, vanishes,
)
from fixtures import (
    BINARY3, BINARY4, FOUR_CYCLE, chain_basis, chain_matrix, data_path, four_cycle_basis,
    four_cycle_matrix, no_three_way_matrix, random_parameters,
)
from ideal import parse_binomial
from indep import pairwise_ideal
from services.errors import ContractError, DomainError
from services.loaders import load_distribution

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _nice_oracle(F, A):
    """Niceness straight from the row-support definition, with numpy."""
    M = np.array(A.entries) > 0
    covered = M[:, sorted(F)].any(axis=1)
    return all(not (M[:, j] <= covered).all() for j in range(A.m) if j not in F)


class TestParameterization(unittest.TestCase):

    def test_all_ones(self):
        self.assertEqual(phi(four_cycle_matrix(), (1,) * 16), (1,) * 16)

    def test_no_three_way_components(self):
        v = phi(no_three_way_matrix(), PRIMES)
        self.assertEqual(v[0], 2 * 11 * 23)
        self.assertEqual(v[7], 7 * 19 * 37)

    def test_zero_parameter_zeroes_its_columns(self):
        # t5 is the {X2,X3}=00 row: columns 000 and 100
        v = phi(chain_matrix(), (1, 1, 1, 1, 0, 1, 1, 1))
        self.assertEqual([j for j, x in enumerate(v) if x == 0], [0, 4])

    def test_length_mismatch(self):
        with self.assertRaises(DomainError):
            phi(chain_matrix(), (1, 1))

    def test_negative_parameter_rejected(self):
        with self.assertRaises(DomainError):
            ParameterVector((1, -1))


class TestDistribution(unittest.TestCase):

    def test_normalize(self):
        self.assertEqual(normalize((1, 1, 2)).probs, (Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)))

    def test_normalize_zero_vector(self):
        with self.assertRaises(DomainError):
            normalize((0, 0, 0))

    def test_sum_must_be_one(self):
        with self.assertRaises(DomainError):
            Distribution((Fraction(1, 2), Fraction(1, 3)))

    def test_support(self):
        self.assertEqual(support(Distribution.uniform(BINARY3)), frozenset(range(8)))
        self.assertEqual(support(Distribution.point_mass(BINARY3, 5)), frozenset({5}))

    def test_frame(self):
        frame = Distribution.uniform(BINARY3).to_frame()
        self.assertEqual(list(frame["probability"])[:1], ["1/8"])


class TestNiceness(unittest.TestCase):

    def test_full_support(self):
        self.assertTrue(is_nice(range(16), four_cycle_matrix()))

    def test_four_cycle_corners(self):
        F = {BINARY4.index_of_label(s) for s in ("0000", "0011", "1100", "1111")}
        self.assertTrue(is_nice(F, four_cycle_matrix()))

    def test_limit_only_support(self):
        P = load_distribution(data_path("limit_only.dist"), BINARY4)
        self.assertFalse(is_nice(support(P), four_cycle_matrix()))

    def test_empty_support(self):
        self.assertFalse(is_nice(set(), chain_matrix()))

    def test_matches_definition_on_random_subsets(self):
        rng = random.Random(3)
        for A in (chain_matrix(), four_cycle_matrix(), no_three_way_matrix()):
            for _ in range(200):
                F = {j for j in range(A.m) if rng.random() < 0.4} or {0}
                self.assertEqual(is_nice(F, A), _nice_oracle(F, A), sorted(F))


class TestClassify(unittest.TestCase):

    def test_uniform_factors(self):
        verdict = classify(Distribution.uniform(BINARY4), four_cycle_matrix(), four_cycle_basis())
        self.assertEqual(verdict.status, Status.FACTORS)
        self.assertEqual(len(verdict.support), 16)

    def test_point_mass_factors(self):
        P = load_distribution(data_path("point_mass.dist"), BINARY4)
        self.assertEqual(classify(P, four_cycle_matrix(), four_cycle_basis()).status, Status.FACTORS)

    def test_limit_only(self):
        P = load_distribution(data_path("limit_only.dist"), BINARY4)
        self.assertIsNone(vanishes(P, four_cycle_basis()))
        verdict = classify(P, four_cycle_matrix(), four_cycle_basis())
        self.assertEqual(verdict.status, Status.LIMIT_ONLY)
        self.assertFalse(verdict.nice)

    def test_perturbed_is_outside(self):
        P = load_distribution(data_path("perturbed.dist"), BINARY4)
        self.assertNotEqual(parse_binomial("p1011 p1110 - p1010 p1111", BINARY4).evaluate(P.probs), 0)
        verdict = classify(P, four_cycle_matrix(), four_cycle_basis())
        self.assertEqual(verdict.status, Status.OUTSIDE)
        self.assertNotEqual(verdict.failing_binomial.evaluate(P.probs), 0)

    def test_image_points_factor(self):
        """Verify 200 random image points per model vanish on the basis and have nice support."""
        rng = random.Random(11)
        for A, basis, space in ((chain_matrix(), chain_basis(), BINARY3), (four_cycle_matrix(), four_cycle_basis(), BINARY4)):
            for _ in range(200):
                P = normalize(phi(A, random_parameters(rng, A.d)), space)
                self.assertIsNone(vanishes(P, basis))
                self.assertTrue(is_nice(support(P), A))
                self.assertEqual(classify(P, A, basis).status, Status.FACTORS)

    def test_grid_images_never_outside(self):
        A, basis = chain_matrix(), chain_basis()
        for t in product((0, 1, 2), repeat=A.d):
            v = phi(A, t)
            if not any(v):
                continue
            self.assertEqual(classify(normalize(v, BINARY3), A, basis).status, Status.FACTORS, t)

    def test_positive_images_satisfy_pairwise_ideal(self):
        rng = random.Random(5)
        A = four_cycle_matrix()
        pairwise = pairwise_ideal(FOUR_CYCLE, BINARY4)
        for _ in range(50):
            P = normalize(phi(A, random_parameters(rng, A.d)), BINARY4)
            self.assertIsNone(vanishes(P, pairwise))

    def test_verdict_contract(self):
        with self.assertRaises(ContractError):
            FactorizationVerdict(Status.FACTORS, frozenset({0}), nice=False)
        with self.assertRaises(ContractError):
            FactorizationVerdict(Status.OUTSIDE, frozenset({0}), nice=True)


class TestRecoverParameters(unittest.TestCase):

    def _reproduces(self, P, A, t):
        Q = normalize(phi(A, t), P.space)
        for p, q in zip(P.probs, Q.probs):
            if p == 0:
                self.assertEqual(q, 0)
            else:
                self.assertLess(abs(float((q - p) / p)), 1e-9)

    def test_uniform(self):
        A = four_cycle_matrix()
        P = Distribution.uniform(BINARY4)
        t = recover_parameters(P, A)
        self.assertIsInstance(t, ParameterVector)
        self._reproduces(P, A, t)

    def test_product_distribution(self):
        A = chain_matrix()
        P = load_distribution(data_path("chain_product.dist"), BINARY3)
        self._reproduces(P, A, recover_parameters(P, A))

    def test_zero_parameter(self):
        A = chain_matrix()
        P = normalize(phi(A, (1, 2, 3, 1, 0, 2, 1, 5)), BINARY3)
        t = recover_parameters(P, A)
        self.assertEqual(t.t[4], 0)
        self._reproduces(P, A, t)

    def test_random_image_points(self):
        rng = random.Random(17)
        A = four_cycle_matrix()
        for _ in range(20):
            P = normalize(phi(A, random_parameters(rng, A.d)), BINARY4)
            self._reproduces(P, A, recover_parameters(P, A))

    def test_limit_only_fails(self):
        P = load_distribution(data_path("limit_only.dist"), BINARY4)
        result = recover_parameters(P, four_cycle_matrix())
        self.assertIsInstance(result, RecoveryFailure)
        self.assertFalse(result)


if __name__ == '__main__':
    unittest.main()
