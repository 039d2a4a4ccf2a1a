# Copyright (C) 2025 The cbspart developers
#
# This file is part of cbspart.
#
# cbspart is released under the MIT license. See LICENSE in the root of the
# repository for full licensing details.

import os
import numpy as np
import scipy.linalg
import scipy.sparse as sp
from collections import deque
from cbspart.sparse_utils import SparseSymMatrix

ROOT = os.path.abspath(os.path.dirname(__file__))
DATA_PATH = os.path.join(ROOT, 'data')


def random_spd(n, seed=0, density=0.3, dominance=1.1):
    """
    Random sparse symmetric positive definite matrix with a connected graph.

    The off-diagonal entries are uniform in (-1, 1) on a random pattern plus
    a path through all vertices. The diagonal makes the matrix strictly
    diagonally dominant by the factor ``dominance``.

    """
    rng = np.random.default_rng(seed)

    mask = np.triu(rng.random((n, n)) < density, k=1)
    mask[np.arange(n - 1), np.arange(1, n)] = True

    upper = np.where(mask, rng.uniform(-1., 1., size=(n, n)), 0.)
    # keep the path edges away from zero
    path = upper[np.arange(n - 1), np.arange(1, n)]
    upper[np.arange(n - 1), np.arange(1, n)] = np.where(
        np.abs(path) < 0.1, 0.5, path)

    dense = upper + upper.T
    diag = dominance * np.abs(dense).sum(axis=1) + rng.uniform(0.1, 1., n)
    dense[np.diag_indices(n)] = diag

    return SparseSymMatrix(sp.csr_matrix(dense))


def path_matrix(n, coupling=-0.5):
    """Unit-diagonal tridiagonal matrix of a path with n vertices."""
    off = coupling * np.ones(n - 1)
    return SparseSymMatrix(sp.diags([off, np.ones(n), off], [-1, 0, 1]))


def kronecker_laplacian(grid):
    """5-point Laplacian scaled by 1/h**2 as Kronecker sum."""
    T = sp.diags([-np.ones(grid - 1), 2.*np.ones(grid),
                  -np.ones(grid - 1)], [-1, 0, 1])
    eye = sp.identity(grid)
    return (sp.kron(eye, T) + sp.kron(T, eye)) * (grid + 1)**2


def block_diagonal_inverse(A, subdomains):
    """Dense sum of E_k A_k^{-1} E_k^T."""
    dense = A.toarray()
    B = np.zeros_like(dense)
    for V in subdomains:
        B[np.ix_(V, V)] += np.linalg.inv(dense[np.ix_(V, V)])
    return B


def dense_eigenpair(A, B=None, index=0, constraint=None):
    """
    Eigenpair number ``index`` of the dense pencil (A, B), optionally on the
    orthogonal complement of ``constraint``.

    """
    A = np.asarray(A, dtype=float)
    B = np.eye(A.shape[0]) if B is None else np.asarray(B, dtype=float)

    if constraint is not None:
        Q = scipy.linalg.null_space(np.atleast_2d(constraint))
        lam, vec = scipy.linalg.eigh(Q.T @ A @ Q, Q.T @ B @ Q)
        return lam[index], Q @ vec[:, index]

    lam, vec = scipy.linalg.eigh(A, B)
    return lam[index], vec[:, index]


def is_connected(adjacency, V):
    """Breadth-first search connectivity of the subgraph induced by V."""
    V = list(V)
    if not V:
        return False

    adjacency = sp.csr_matrix(adjacency)
    inside = set(V)
    seen = {V[0]}
    queue = deque([V[0]])

    while queue:
        i = queue.popleft()
        for j in adjacency.indices[adjacency.indptr[i]:adjacency.indptr[i+1]]:
            if j in inside and j not in seen:
                seen.add(j)
                queue.append(j)

    return len(seen) == len(inside)


def assert_partition(testcase, subdomains, n):
    """Check that the subdomains are disjoint and cover range(n)."""
    labels = np.concatenate(subdomains)
    testcase.assertEqual(labels.size, n)
    np.testing.assert_equal(np.sort(labels), np.arange(n))
