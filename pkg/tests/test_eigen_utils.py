# Copyright (C) 2025 The cbspart developers
#
# This file is part of cbspart.
#
# cbspart is released under the MIT license. See LICENSE in the root of the
# repository for full licensing details.

import textwrap
import numpy as np
from unittest import TestCase, main
from cbspart import eigen_utils as eu
from cbspart.laplacian_utils import (cbs_weights, build_laplacians,
                                     indicator_vector)
from cbspart.cbs_utils import gamma_tilde
from cbspart.sparse_utils import Graph, SparseSymMatrix

try:
    from tests.helpers import random_spd, path_matrix, dense_eigenpair
except ImportError:
    from helpers import random_spd, path_matrix, dense_eigenpair


class EigenUtils(TestCase):
    def setUp(self):

        print(textwrap.dedent(f"""\

            {"":-^70}
            Running {self._testMethodName}:
            """))

        self.G = cbs_weights(random_spd(60, seed=21, density=0.08))
        self.laplacians = build_laplacians(self.G)

    def oracle(self, kind):
        L_w = self.laplacians.L_w.toarray()
        L = self.laplacians.L.toarray()
        n = L.shape[0]

        if kind == 'cbs_ratio':
            return dense_eigenpair(L_w, L, 0, constraint=np.ones(n))
        elif kind == 'fiedler':
            return dense_eigenpair(L, index=1)
        elif kind == 'mincut':
            return dense_eigenpair(L_w, index=1)
        else:
            return dense_eigenpair(L_w, np.diag(self.laplacians.d_w), 1)

    def test_problem_spec(self):

        self.assertEqual(eu.EigProblemSpec('cbs_ratio').block_size, 1)
        self.assertEqual(eu.EigProblemSpec('mcut').block_size, 1)
        self.assertEqual(eu.EigProblemSpec('fiedler').block_size, 2)
        self.assertEqual(eu.EigProblemSpec('mincut').block_size, 2)
        self.assertTrue(eu.EigProblemSpec('fiedler',
                                          block_size=1).constrained)

        spec = eu.EigProblemSpec('mincut')
        self.assertEqual((spec.tol, spec.maxiter, spec.sigma, spec.droptol),
                         (1e-4, 500, 0.1, 1e-3))

        with self.assertRaises(ValueError):
            eu.EigProblemSpec('unknown')
        with self.assertRaises(ValueError):
            eu.EigProblemSpec('cbs_ratio', block_size=2)
        with self.assertRaises(ValueError):
            eu.EigProblemSpec('fiedler', block_size=3)

    def test_fiedler_path(self):

        G = Graph.from_matrix(path_matrix(4))
        laplacians = build_laplacians(G)
        spec = eu.EigProblemSpec('fiedler')

        result = eu.lobpcg_smallest(spec, laplacians.L_w, laplacians.L)
        self.assertAlmostEqual(result.eigenvalue, 2. - np.sqrt(2.),
                               delta=1e-6)
        self.assertEqual(result.method, 'dense')

        # longer path through LOBPCG
        n = 50
        laplacians = build_laplacians(Graph.from_matrix(path_matrix(n)))
        result = eu.lobpcg_smallest(
            eu.EigProblemSpec('fiedler', tol=1e-7, maxiter=2000),
            laplacians.L_w, laplacians.L, dense_limit=0)

        self.assertEqual(result.method, 'lobpcg')
        self.assertTrue(result.converged)
        np.testing.assert_allclose(result.eigenvalue,
                                   2. - 2.*np.cos(np.pi / n), rtol=1e-6)
        # monotone along the path
        v = result.eigenvector * np.sign(result.eigenvector[-1])
        self.assertTrue(np.all(np.diff(v) > 0.))

    def test_lobpcg_oracle(self):

        for kind in eu.KINDS:
            with self.subTest(kind=kind):
                spec = eu.EigProblemSpec(kind, tol=1e-6, maxiter=2000)
                result = eu.lobpcg_smallest(spec, self.laplacians.L_w,
                                            self.laplacians.L,
                                            self.laplacians.d_w,
                                            dense_limit=0)
                lam, vec = self.oracle(kind)

                self.assertEqual(result.method, 'lobpcg')
                self.assertTrue(result.converged)
                self.assertLessEqual(result.residual_norm, 1e-6)
                np.testing.assert_allclose(result.eigenvalue, lam,
                                           rtol=1e-6)
                self.assertAlmostEqual(np.linalg.norm(result.eigenvector),
                                       1.)

    def test_dense_oracle(self):

        for kind in eu.KINDS:
            with self.subTest(kind=kind):
                spec = eu.EigProblemSpec(kind)
                result = eu.lobpcg_smallest(spec, self.laplacians.L_w,
                                            self.laplacians.L,
                                            dense_limit=100)
                lam, vec = self.oracle(kind)

                self.assertEqual(result.method, 'dense')
                np.testing.assert_allclose(result.eigenvalue, lam,
                                           rtol=1e-9)
                self.assertAlmostEqual(abs(result.eigenvector @ vec)
                                       / np.linalg.norm(vec), 1.,
                                       delta=1e-6)

    def test_constraint(self):

        spec = eu.EigProblemSpec('cbs_ratio', tol=1e-7, maxiter=2000)
        result = eu.lobpcg_smallest(spec, self.laplacians.L_w,
                                    self.laplacians.L, dense_limit=0)
        self.assertAlmostEqual(result.eigenvector.sum(), 0., delta=1e-7)

        spec = eu.EigProblemSpec('mcut', tol=1e-7, maxiter=2000)
        result = eu.lobpcg_smallest(spec, self.laplacians.L_w,
                                    self.laplacians.L, dense_limit=0)
        self.assertAlmostEqual(result.eigenvector @ self.laplacians.d_w, 0.,
                               delta=1e-7)

    def test_not_converged(self):

        spec = eu.EigProblemSpec('mincut', tol=1e-14, maxiter=1)

        with self.assertWarns(UserWarning):
            result = eu.lobpcg_smallest(spec, self.laplacians.L_w,
                                        self.laplacians.L, dense_limit=0)
        self.assertFalse(result.converged)

    def test_ic_precond(self):

        M = self.laplacians.L_w
        P = eu.ic_precond(M, droptol=0., sigma=0.1)
        b = np.random.default_rng(22).standard_normal(M.n)

        expected = np.linalg.solve(M.toarray() + 0.1*np.eye(M.n), b)
        np.testing.assert_allclose(P.matvec(b), expected, rtol=1e-8)
        self.assertEqual(P.sigma, 0.1)

        # zero matrix
        Z = SparseSymMatrix(np.zeros((3, 3)), check_diagonal=False)
        np.testing.assert_allclose(eu.ic_precond(Z, sigma=0.1)
                                   .matvec(np.ones(3)), 10.)

    def test_ic_factor(self):

        M = self.laplacians.L_w
        shifted = M.toarray() + 0.1*np.eye(M.n)

        P = eu.ic_precond(M, droptol=0., sigma=0.1)
        np.testing.assert_equal(np.sort(P.order), np.arange(M.n))
        self.assertTrue(np.all(P.factor.diagonal() > 0.))
        np.testing.assert_allclose(
            (P.factor @ P.factor.T).toarray(),
            shifted[np.ix_(P.order, P.order)], atol=1e-10)

        # dropping keeps the operator symmetric positive definite
        P = eu.ic_precond(M, droptol=1e-1, sigma=0.1)
        rng = np.random.default_rng(23)
        u, v = rng.standard_normal((2, M.n))
        self.assertAlmostEqual(u @ P.matvec(v), v @ P.matvec(u),
                               delta=1e-10*np.linalg.norm(u)
                               * np.linalg.norm(v))
        self.assertGreater(u @ P.matvec(u), 0.)

        X = rng.standard_normal((M.n, 2))
        np.testing.assert_allclose(P.matmat(X)[:, 1], P.matvec(X[:, 1]))

    def test_ic_path(self):

        L = build_laplacians(Graph.from_matrix(path_matrix(10))).L
        P = eu.ic_precond(L, droptol=1e-3, sigma=0.1)

        x = np.random.default_rng(24).standard_normal(10)
        y = P.matvec(L.toarray() @ x + 0.1*x)
        self.assertLess(np.linalg.norm(y - x), 0.1*np.linalg.norm(x))

    def test_ritz_history(self):

        for kind in ('cbs_ratio', 'mcut', 'fiedler'):
            with self.subTest(kind=kind):
                spec = eu.EigProblemSpec(kind, tol=1e-6, maxiter=2000)
                result = eu.lobpcg_smallest(spec, self.laplacians.L_w,
                                            self.laplacians.L,
                                            self.laplacians.d_w,
                                            dense_limit=0)

                self.assertGreater(result.history.size, 1)
                self.assertTrue(np.all(np.diff(result.history) <= 1e-12))

    def test_ic_breakdown(self):

        M = SparseSymMatrix([[1., 3.], [3., 1.]], check_diagonal=False)

        with self.assertRaises(eu.ICBreakdownError):
            eu.ic_precond(M, sigma=0., retries=0)

        with self.assertWarns(UserWarning):
            with self.assertRaises(eu.ICBreakdownError):
                eu.ic_precond(M, sigma=0., retries=1)

        with self.assertWarns(UserWarning):
            P = eu.ic_precond(M, sigma=0., retries=5)
        self.assertEqual(P.sigma, 10.)

    def test_rayleigh_quotient(self):

        I, J = np.arange(25), np.arange(25, 60)
        p = indicator_vector(I, 60)

        self.assertAlmostEqual(
            eu.rayleigh_quotient(p, self.laplacians.L_w, self.laplacians.L),
            gamma_tilde(self.G, I, J), delta=1e-12)

        with self.assertRaises(ValueError):
            eu.rayleigh_quotient(np.ones(60), self.laplacians.L_w,
                                 self.laplacians.L)

    def test_eigenvector_separation(self):

        v = np.array([0., 0.1, 1., 1.1])
        mask = np.array([True, True, False, False])

        self.assertAlmostEqual(eu.eigenvector_separation(v, mask), 9.)
        self.assertLess(eu.eigenvector_separation(v[[0, 2, 1, 3]], mask), 0.)
        self.assertEqual(eu.eigenvector_separation(
            np.array([0., 0., 1.]), np.array([True, True, False])), np.inf)

        with self.assertRaises(ValueError):
            eu.eigenvector_separation(v, np.ones(4, dtype=bool))


if __name__ == '__main__':
    main()
