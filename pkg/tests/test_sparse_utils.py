# Copyright (C) 2025 The cbspart developers
#
# This file is part of cbspart.
#
# cbspart is released under the MIT license. See LICENSE in the root of the
# repository for full licensing details.

import textwrap
import numpy as np
import scipy.sparse as sp
from unittest import TestCase, main
from cbspart import sparse_utils as su

try:
    from tests.helpers import random_spd, path_matrix
except ImportError:
    from helpers import random_spd, path_matrix


class SparseUtils(TestCase):
    def setUp(self):

        print(textwrap.dedent(f"""\

            {"":-^70}
            Running {self._testMethodName}:
            """))

    def test_sparse_sym_matrix(self):

        A = su.SparseSymMatrix([[2., -1., 0.], [-1., 2., -1.], [0., -1., 2.]])

        self.assertEqual(A.n, 3)
        self.assertEqual(A.nnz, 7)
        np.testing.assert_equal(A.diagonal(), [2., 2., 2.])
        np.testing.assert_allclose(A @ np.ones(3), [1., 0., 1.])

        # tiny asymmetry is symmetrized
        B = su.SparseSymMatrix([[1., 0.5], [0.5 + 1e-15, 1.]])
        np.testing.assert_equal(B.toarray(), B.toarray().T)

        with self.assertRaises(su.NotSPDError):
            su.SparseSymMatrix([[1., 0.5], [0.4, 1.]])

        with self.assertRaises(su.NotSPDError):
            su.SparseSymMatrix([[1., 0.], [0., 0.]])

        with self.assertRaises(ValueError):
            su.SparseSymMatrix(np.ones((2, 3)))

        # duplicates are summed
        coo = sp.coo_matrix(([1., 1., 2.], ([0, 0, 1], [0, 0, 1])),
                            shape=(2, 2))
        np.testing.assert_equal(su.SparseSymMatrix(coo).diagonal(), [2., 2.])

    def test_graph_from_matrix(self):

        A = su.SparseSymMatrix([[2., -1., 0.], [-1., 2., 0.], [0., 0., 1.]])
        G = su.Graph.from_matrix(A)

        self.assertEqual(G.n, 3)
        self.assertEqual(G.n_edges, 1)
        self.assertFalse(G.is_weighted)
        np.testing.assert_equal(G.neighbors(0), [1])
        np.testing.assert_equal(G.neighbors(2), [])

        # explicitly stored zeros are no edges
        stored = sp.csr_matrix(([1., 0., 0., 1.], ([0, 0, 1, 1],
                                                    [0, 1, 0, 1])),
                               shape=(2, 2))
        self.assertEqual(su.Graph.from_matrix(stored).n_edges, 0)

    def test_graph_subgraph(self):

        W = sp.csr_matrix(np.array([[0., 1., 0., 4.],
                                    [1., 0., 2., 0.],
                                    [0., 2., 0., 3.],
                                    [4., 0., 3., 0.]]))
        G = su.Graph(W)

        sub = G.subgraph([1, 2, 3])
        np.testing.assert_allclose(sub.weight_matrix().toarray(),
                                   [[0., 2., 0.], [2., 0., 3.], [0., 3., 0.]])

        rows, cols, weights = G.edges()
        np.testing.assert_equal(rows < cols, True)
        self.assertAlmostEqual(weights.sum(), 10.)

    def test_graph_zero_weight_kept(self):

        W = sp.csr_matrix(([0., 0., 1., 1.], ([0, 1, 1, 2], [1, 0, 2, 1])),
                          shape=(3, 3))
        G = su.Graph(W)

        self.assertEqual(G.n_edges, 2)
        np.testing.assert_equal(G.neighbors(0), [1])

        sub = G.subgraph([0, 1])
        self.assertEqual(sub.n_edges, 1)
        np.testing.assert_equal(sub.weights, [0., 0.])

    def test_as_vertex_set(self):

        np.testing.assert_equal(su.as_vertex_set([3, 1, 2]), [1, 2, 3])
        self.assertEqual(su.as_vertex_set([]).size, 0)

        with self.assertRaises(ValueError):
            su.as_vertex_set([1, 1])
        with self.assertRaises(ValueError):
            su.as_vertex_set([0, 5], n=5)
        with self.assertRaises(ValueError):
            su.as_vertex_set([-1])
        with self.assertRaises(ValueError):
            su.as_vertex_set([0.5])

    def test_diag_scale(self):

        A = random_spd(12, seed=3)
        B, f = su.diag_scale(A)

        np.testing.assert_equal(B.diagonal(), np.ones(12))
        np.testing.assert_allclose(B.toarray(),
                                   np.diag(f) @ A.toarray() @ np.diag(f),
                                   rtol=1e-14, atol=1e-15)
        np.testing.assert_equal(B.toarray(), B.toarray().T)

        # scaling a scaled matrix changes nothing
        C, g = su.diag_scale(B)
        np.testing.assert_allclose(g, 1., rtol=0., atol=1e-14)
        np.testing.assert_allclose(C.toarray(), B.toarray(), rtol=0.,
                                   atol=1e-14)

    def test_submatrix(self):

        A = random_spd(8, seed=1)
        V = [6, 1, 3]
        np.testing.assert_equal(su.submatrix(A, V).toarray(),
                                A.toarray()[np.ix_([1, 3, 6], [1, 3, 6])])

        with self.assertRaises(ValueError):
            su.submatrix(A, [])

    def test_connected_components(self):

        # two paths 0-1-2 and 3-4
        A = sp.block_diag((path_matrix(3).csr, path_matrix(2).csr))
        G = su.Graph.from_matrix(A)

        components = su.connected_components(G)
        self.assertEqual(len(components), 2)
        np.testing.assert_equal(components[0], [0, 1, 2])
        np.testing.assert_equal(components[1], [3, 4])

        # removing the middle vertex disconnects the first path
        components = su.connected_components(G, [0, 2, 3, 4])
        self.assertEqual([c.tolist() for c in components],
                         [[0], [2], [3, 4]])

    def test_symmetric_permute(self):

        A = random_spd(6, seed=2)
        perm = np.array([3, 0, 5, 1, 4, 2])
        C = su.symmetric_permute(A, perm).toarray()
        dense = A.toarray()

        for i in range(6):
            for j in range(6):
                self.assertEqual(C[perm[i], perm[j]], dense[i, j])

        # the spectrum is preserved
        rng = np.random.default_rng(4)
        for n in [10, 31, 50]:
            A = random_spd(n, seed=n)
            C = su.symmetric_permute(A, rng.permutation(n))
            np.testing.assert_allclose(np.linalg.eigvalsh(C.toarray()),
                                       np.linalg.eigvalsh(A.toarray()),
                                       rtol=0., atol=1e-10)

        with self.assertRaises(ValueError):
            su.symmetric_permute(A, [0, 0, 1, 2, 3, 4])

    def test_check_spd(self):

        for seed in range(5):
            su.check_spd(random_spd(40, seed=seed))
        su.check_spd(path_matrix(20))

        # positive diagonal, indefinite
        with self.assertRaises(su.NotSPDError):
            su.check_spd(su.SparseSymMatrix([[1., 2.], [2., 1.]]))

        with self.assertRaises(su.NotSPDError):
            su.check_spd(su.SparseSymMatrix(
                [[1., 2., 0.], [2., 1., 0.5], [0., 0.5, 1.]]))

        # singular
        with self.assertRaises(su.NotSPDError):
            su.check_spd(su.SparseSymMatrix([[1., 1.], [1., 1.]]))


if __name__ == '__main__':
    main()
