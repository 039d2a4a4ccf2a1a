# Copyright (C) 2025 The cbspart developers
#
# This file is part of cbspart.
#
# cbspart is released under the MIT license. See LICENSE in the root of the
# repository for full licensing details.

import textwrap
import warnings
import numpy as np
import scipy.sparse as sp
from unittest import TestCase, main
from cbspart import cbs_utils as cu
from cbspart.laplacian_utils import cbs_weights
from cbspart.sparse_utils import SparseSymMatrix, NotSPDError, diag_scale

try:
    from tests.helpers import (random_spd, path_matrix,
                               block_diagonal_inverse)
except ImportError:
    from helpers import random_spd, path_matrix, block_diagonal_inverse


class CbsUtils(TestCase):
    def setUp(self):

        print(textwrap.dedent(f"""\

            {"":-^70}
            Running {self._testMethodName}:
            """))

    def test_cbs_exact_two_by_two(self):

        for g in [0.1, 0.5, 0.9]:
            A = SparseSymMatrix([[1., g], [g, 1.]])
            gamma = cu.cbs_exact(A, [0], [1])
            self.assertAlmostEqual(gamma, g, delta=1e-14)

            # the bound is attained
            kappa = cu.cond_measured(A, [[0], [1]])
            np.testing.assert_allclose(kappa, cu.cond_bound(gamma),
                                       rtol=1e-12)

    def test_cbs_exact_symmetric(self):

        A = random_spd(12, seed=11)
        I, J = [0, 3, 4, 8, 10], [1, 2, 5, 6, 7, 9, 11]
        self.assertEqual(cu.cbs_exact(A, I, J), cu.cbs_exact(A, J, I))

    def test_cbs_exact_errors(self):

        A = random_spd(6, seed=1)

        with self.assertRaises(ValueError):
            cu.cbs_exact(A, [], list(range(6)))
        with self.assertRaises(ValueError):
            cu.cbs_exact(A, [0, 1], [1, 2, 3, 4, 5])
        with self.assertRaises(ValueError):
            cu.cbs_exact(A, [0, 1, 2], [3, 4, 5], dense_limit=5)

        # indefinite diagonal block
        dense = np.array([[1., 2., 0.], [2., 1., 0.1], [0., 0.1, 1.]])
        with self.assertRaises(NotSPDError):
            cu.cbs_exact(SparseSymMatrix(dense), [0, 1], [2])

    def test_condition_bound(self):

        rng = np.random.default_rng(12)

        for k in range(100):
            n = int(rng.integers(2, 21))
            A = random_spd(n, seed=100 + k, density=0.4,
                           dominance=rng.uniform(0.6, 1.5))
            try:
                np.linalg.cholesky(A.toarray())
            except np.linalg.LinAlgError:
                continue

            s = int(rng.integers(1, n))
            perm = rng.permutation(n)
            I, J = np.sort(perm[:s]), np.sort(perm[s:])

            gamma = cu.cbs_exact(A, I, J)
            kappa = cu.cond_measured(A, [I, J])

            self.assertLessEqual(kappa, cu.cond_bound(gamma) * (1. + 1e-8))

    def test_gamma_tilde_lower_estimate(self):

        # every cut weight is a lower bound of the CBS constant
        for seed in range(20):
            A = random_spd(15, seed=seed)
            I, J = np.arange(7), np.arange(7, 15)
            G = cbs_weights(A)
            self.assertLessEqual(cu.gamma_tilde(G, I, J),
                                 cu.cbs_exact(A, I, J) + 1e-12)

    def test_estimates_below_exact(self):

        rng = np.random.default_rng(15)

        for k in range(60):
            n = int(rng.integers(4, 21))
            A = random_spd(n, seed=200 + k, density=0.4,
                           dominance=rng.uniform(0.6, 1.5))
            try:
                np.linalg.cholesky(A.toarray())
            except np.linalg.LinAlgError:
                continue

            s = int(rng.integers(1, n))
            perm = rng.permutation(n)
            I, J = np.sort(perm[:s]), np.sort(perm[s:])

            gamma = cu.cbs_exact(A, I, J)
            G = cbs_weights(A)
            scaled, _ = diag_scale(A)

            with warnings.catch_warnings():
                warnings.simplefilter('ignore', UserWarning)
                estimates = {
                    'tilde': cu.gamma_tilde(G, I, J),
                    'bar': cu.gamma_bar(G, I, J),
                    'hat': cu.gamma_hat(scaled, I, J),
                }

            for name, value in estimates.items():
                with self.subTest(instance=k, estimate=name):
                    self.assertLessEqual(value, gamma + 1e-10)

    def test_cbs_exact_scaling(self):

        rng = np.random.default_rng(16)

        for k in range(20):
            n = int(rng.integers(3, 21))
            A = random_spd(n, seed=300 + k)
            d = rng.uniform(0.1, 10., n)
            B = SparseSymMatrix(sp.diags(d) @ A.csr @ sp.diags(d))

            s = int(rng.integers(1, n))
            I, J = np.arange(s), np.arange(s, n)

            gamma = cu.cbs_exact(A, I, J)
            self.assertAlmostEqual(cu.cbs_exact(B, I, J), gamma, delta=1e-10)
            self.assertAlmostEqual(cu.cbs_exact(diag_scale(A)[0], I, J),
                                   gamma, delta=1e-10)

    def test_gamma_bar_unbalanced(self):

        A = path_matrix(5)
        G = cbs_weights(A)

        with self.assertWarns(UserWarning):
            value = cu.gamma_bar(G, [0, 1], [2, 3, 4])
        self.assertAlmostEqual(value, 0.5 / 6.)

        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter('always')
            cu.gamma_bar(cbs_weights(path_matrix(4)), [0, 1], [2, 3])
        self.assertEqual(len(caught), 0)

    def test_estimates_path(self):

        A = path_matrix(4)
        G = cbs_weights(A)
        I, J = [0, 1], [2, 3]

        self.assertAlmostEqual(cu.gamma_tilde(G, I, J), 0.5)
        self.assertAlmostEqual(cu.gamma_bar(G, I, J), 0.125)
        self.assertAlmostEqual(cu.gamma_hat(A, I, J), 1./12.)
        self.assertAlmostEqual(cu.gamma_hat(A, I, J, diagonal=False), 0.25)

        with self.assertRaises(ValueError):
            cu.gamma_hat(SparseSymMatrix(2.*A.toarray()), I, J)

    def test_gamma_tilde_zero_cut(self):

        A = SparseSymMatrix(sp.block_diag((path_matrix(2).csr,
                                           path_matrix(2).csr)))
        G = cbs_weights(A)

        with self.assertWarns(UserWarning):
            value = cu.gamma_tilde(G, [0, 1], [2, 3])
        self.assertEqual(value, 0.)

    def test_cond_bound(self):

        self.assertAlmostEqual(cu.cond_bound(0.5), 3.)
        self.assertEqual(cu.cond_bound(0.), 1.)

        with self.assertRaises(ValueError):
            cu.cond_bound(1.)
        with self.assertRaises(ValueError):
            cu.cond_bound(-0.1)

    def test_cond_measured_block_jacobi(self):

        A = random_spd(10, seed=13)
        subdomains = [np.array([0, 1, 2, 3]), np.array([4, 5, 6]),
                      np.array([7, 8, 9])]

        B = block_diagonal_inverse(A, subdomains)
        eigs = np.sort(np.real(np.linalg.eigvals(B @ A.toarray())))

        np.testing.assert_allclose(cu.cond_measured(A, subdomains),
                                   eigs[-1] / eigs[0], rtol=1e-10)

        with self.assertRaises(ValueError):
            cu.cond_measured(A, subdomains[:2])

    def test_cbs_report(self):

        A = random_spd(10, seed=14)
        report = cu.cbs_report(A, np.arange(4), np.arange(4, 10))

        self.assertFalse(report.balanced)
        self.assertEqual((report.size_I, report.size_J), (4, 6))
        self.assertAlmostEqual(report.gamma,
                               cu.cbs_exact(A, np.arange(4),
                                            np.arange(4, 10)))
        self.assertAlmostEqual(report.bound, cu.cond_bound(report.gamma))
        self.assertEqual(set(report.to_dict()),
                         {'gamma', 'gamma_tilde', 'gamma_bar', 'gamma_hat',
                          'bound', 'size_I', 'size_J', 'cut', 'balanced'})

        report = cu.cbs_report(A, np.arange(4), np.arange(4, 10),
                               dense_limit=5)
        self.assertTrue(np.isnan(report.gamma))


if __name__ == '__main__':
    main()
