# Copyright (C) 2025 The cbspart developers
#
# This file is part of cbspart.
#
# cbspart is released under the MIT license. See LICENSE in the root of the
# repository for full licensing details.

"""
`cbspart.sparse_utils` contains the symmetric sparse matrix and graph
containers together with the elementary operations used by the partitioner
and the solver (diagonal scaling, principal submatrices, symmetric
permutations, connected components and a positive definiteness check).

Vertex sets are plain sorted :class:`numpy.ndarray` of integer indices. Use
:func:`as_vertex_set` to validate user input.

.. autosummary::
    :toctree: classes
    :template: myclass.rst

    SparseSymMatrix
    Graph

.. autosummary::
    :toctree: functions

    as_sym_matrix
    as_vertex_set
    diag_scale
    submatrix
    connected_components
    symmetric_permute
    check_spd

"""

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph
from scipy.sparse.linalg import splu
from .config_utils import basicConfig


class NotSPDError(ValueError):
    """
    Raised when a matrix cannot be symmetric positive definite (asymmetric
    values, nonpositive diagonal, failed Cholesky factorization or a
    nonpositive curvature in the conjugate gradient iteration).

    """


class DegenerateSplitError(ValueError):
    """
    Raised when no bipartition with two nonempty sides can be formed.

    """


class SparseSymMatrix(object):
    """
    Symmetric sparse matrix in compressed-row form with both triangles
    stored.

    Parameters
    ----------
    matrix : array_like or sparse matrix, shape (n, n)
        Matrix entries. Duplicate entries are summed.
    check_diagonal : bool, optional
        If ``True`` (default), every diagonal entry must be strictly positive.
        Laplacians are built with ``False``.
    rtol : float, optional
        Relative asymmetry ``max|a_ij - a_ji| / max|a_ij|`` below which the
        matrix is replaced by its symmetric part. Larger asymmetries are
        rejected. Defaults to ``basicConfig['params.symmetry_rtol']``.

    Attributes
    ----------
    csr : :class:`scipy.sparse.csr_matrix`, shape (n, n)
        Canonical storage (sorted column indices, no duplicates).
    n : int
        Number of rows and columns.

    Raises
    ------
    NotSPDError
        If the matrix is not symmetric or has a nonpositive diagonal entry.

    """

    def __init__(self, matrix, *, check_diagonal=True, rtol=None):

        rtol = basicConfig['params.symmetry_rtol'] if rtol is None else rtol

        csr = sp.csr_matrix(matrix, dtype=float, copy=True)

        if csr.shape[0] != csr.shape[1]:
            raise ValueError(f'Matrix must be square, got shape {csr.shape}.')

        csr.sum_duplicates()

        if not np.all(np.isfinite(csr.data)):
            raise ValueError('Matrix contains non-finite entries.')

        asym = abs(csr - csr.T).max() if csr.nnz > 0 else 0.
        if asym > 0.:
            scale = abs(csr).max()
            if asym <= rtol*scale:
                csr = ((csr + csr.T)*0.5).tocsr()
                csr.sum_duplicates()
            else:
                raise NotSPDError(
                    f'Matrix is not symmetric, max |a_ij - a_ji| = '
                    f'{asym:.3e} (relative {asym/scale:.3e}).')

        csr.sort_indices()

        if check_diagonal:
            diag = csr.diagonal()
            bad = np.flatnonzero(~(diag > 0.))
            if bad.size > 0:
                raise NotSPDError(
                    f'Nonpositive diagonal entry a[{bad[0]}, {bad[0]}] = '
                    f'{diag[bad[0]]}.')

        self.csr = csr
        self.n = csr.shape[0]

    @property
    def shape(self):
        return self.csr.shape

    @property
    def nnz(self):
        return self.csr.nnz

    @property
    def indptr(self):
        return self.csr.indptr

    @property
    def indices(self):
        return self.csr.indices

    @property
    def data(self):
        return self.csr.data

    def diagonal(self):
        return self.csr.diagonal()

    def toarray(self):
        return self.csr.toarray()

    def __matmul__(self, other):
        return self.csr @ other

    def __repr__(self):
        return f'SparseSymMatrix(n={self.n}, nnz={self.nnz})'


class Graph(object):
    """
    Undirected graph with optional nonnegative edge weights.

    Parameters
    ----------
    matrix : sparse matrix or array_like, shape (n, n)
        Symmetric matrix whose stored off-diagonal entries define the edges.
        Diagonal entries are ignored.
    weighted : bool, optional
        If ``True`` (default), the stored values are kept as edge weights,
        otherwise only the pattern is used.

    Attributes
    ----------
    n : int
        Number of vertices.
    adjacency : :class:`scipy.sparse.csr_matrix`, shape (n, n)
        Adjacency pattern (all stored values are one), both directions
        stored, sorted column indices.
    weights : ndarray, shape (adjacency.nnz,) or None
        Edge weights aligned with ``adjacency.indices``.

    """

    def __init__(self, matrix, *, weighted=True):

        csr = sp.csr_matrix(matrix, dtype=float, copy=True)
        if csr.shape[0] != csr.shape[1]:
            raise ValueError(f'Adjacency must be square, got {csr.shape}.')

        coo = csr.tocoo()
        keep = coo.row != coo.col
        csr = sp.csr_matrix((coo.data[keep], (coo.row[keep], coo.col[keep])),
                            shape=csr.shape)
        csr.sum_duplicates()

        pattern = csr.copy()
        pattern.data[:] = 1.
        if (pattern != pattern.T).nnz > 0:
            raise ValueError('Adjacency structure is not symmetric.')

        if weighted and csr.nnz > 0:
            asym = abs(csr - csr.T).max()
            if asym > basicConfig['params.symmetry_rtol']*abs(csr).max():
                raise ValueError('Edge weights are not symmetric.')

        self.n = csr.shape[0]
        self.adjacency = pattern
        self.weights = csr.data.copy() if weighted else None

    @classmethod
    def from_matrix(cls, A):
        """
        Unweighted adjacency graph G(A) of a sparse symmetric matrix.

        Only nonzero off-diagonal entries become edges.

        """
        csr = as_sym_matrix(A).csr.tocoo()
        keep = (csr.row != csr.col) & (csr.data != 0.)
        pattern = sp.csr_matrix(
            (np.ones(np.count_nonzero(keep)), (csr.row[keep], csr.col[keep])),
            shape=csr.shape)
        return cls(pattern, weighted=False)

    @classmethod
    def _from_arrays(cls, n, indptr, indices, weights):
        # trusted constructor, arrays already canonical and symmetric
        graph = cls.__new__(cls)
        graph.n = n
        graph.adjacency = sp.csr_matrix(
            (np.ones(indices.size), indices, indptr), shape=(n, n))
        graph.weights = None if weights is None else np.asarray(
            weights, dtype=float)
        return graph

    @property
    def is_weighted(self):
        return self.weights is not None

    @property
    def n_edges(self):
        return self.adjacency.nnz // 2

    def neighbors(self, i):
        """Sorted neighbor indices N(i)."""
        start, stop = self.adjacency.indptr[i:i+2]
        return self.adjacency.indices[start:stop]

    def weight_matrix(self):
        """
        Symmetric weight matrix W (unit weights for an unweighted graph).

        Zero weights remain stored so that W has the pattern of the graph.

        """
        data = (np.ones(self.adjacency.nnz) if self.weights is None
                else self.weights.copy())
        return sp.csr_matrix(
            (data, self.adjacency.indices.copy(),
             self.adjacency.indptr.copy()), shape=(self.n, self.n))

    def edges(self):
        """
        Edge list with ``i < j``.

        Returns
        -------
        rows, cols : ndarray, shape (m,)
            Endpoints of the edges.
        weights : ndarray, shape (m,)
            Edge weights (ones if the graph is unweighted).

        """
        coo = self.weight_matrix().tocoo()
        upper = coo.row < coo.col
        return coo.row[upper], coo.col[upper], coo.data[upper]

    def subgraph(self, subset):
        """
        Induced subgraph on ``subset``, vertices renumbered 0, 1, ... in
        the order of ``subset``.

        """
        subset = as_vertex_set(subset, self.n)

        # carry edge ids through the slicing to keep zero weights aligned
        ids = sp.csr_matrix(
            (np.arange(1, self.adjacency.nnz + 1, dtype=float),
             self.adjacency.indices, self.adjacency.indptr),
            shape=(self.n, self.n))
        sub = ids[subset][:, subset].tocsr()
        sub.sort_indices()
        edge = sub.data.astype(np.intp) - 1

        weights = None if self.weights is None else self.weights[edge]
        return Graph._from_arrays(subset.size, sub.indptr, sub.indices,
                                  weights)

    def __repr__(self):
        return (f'Graph(n={self.n}, edges={self.n_edges}, '
                f'weighted={self.is_weighted})')


def as_sym_matrix(A, **kwargs):
    """
    Return ``A`` as :class:`SparseSymMatrix` (no copy if it already is one).

    """
    if isinstance(A, SparseSymMatrix):
        return A
    return SparseSymMatrix(A, **kwargs)


def as_vertex_set(V, n=None):
    """
    Validate a vertex set.

    Parameters
    ----------
    V : array_like of int
        Vertex indices. Unsorted input is sorted.
    n : int, optional
        Number of vertices of the underlying graph for the range check.

    Returns
    -------
    V : ndarray of int, shape (k,)
        Sorted vertex indices.

    Raises
    ------
    ValueError
        If ``V`` has duplicates or indices outside of ``[0, n)``.

    """
    V = np.asarray(V)
    if V.size == 0:
        return np.zeros(0, dtype=np.intp)
    if V.ndim != 1:
        raise ValueError(f'Vertex set must be one-dimensional, '
                         f'got shape {V.shape}.')
    if not np.issubdtype(V.dtype, np.integer):
        if not np.all(V == np.round(V)):
            raise ValueError('Vertex indices must be integers.')
    V = np.sort(V.astype(np.intp))

    if np.any(V[1:] == V[:-1]):
        raise ValueError('Vertex set contains duplicate indices.')
    if V[0] < 0 or (n is not None and V[-1] >= n):
        raise ValueError(f'Vertex index out of range [0, {n}).')

    return V


def diag_scale(A):
    """
    Symmetric diagonal scaling to unit diagonal.

    Parameters
    ----------
    A : :class:`SparseSymMatrix`, shape (n, n)
        Matrix with positive diagonal.

    Returns
    -------
    B : :class:`SparseSymMatrix`, shape (n, n)
        Scaled matrix ``F A F`` with ``F = diag(1/sqrt(a_ii))``. The diagonal
        of ``B`` is exactly one.
    f : ndarray, shape (n,)
        Diagonal of ``F``. A solution ``y`` of ``B y = F b`` maps back to
        ``x = F y``.

    Raises
    ------
    NotSPDError
        If a diagonal entry is nonpositive.

    Examples
    --------
    >>> B, f = diag_scale(SparseSymMatrix([[4., 2.], [2., 4.]]))
    >>> B.toarray()
    array([[1. , 0.5],
           [0.5, 1. ]])

    """
    A = as_sym_matrix(A)

    diag = A.diagonal()
    bad = np.flatnonzero(~(diag > 0.))
    if bad.size > 0:
        raise NotSPDError(f'Nonpositive diagonal entry a[{bad[0]}, {bad[0]}]'
                          f' = {diag[bad[0]]}.')

    f = 1. / np.sqrt(diag)
    F = sp.diags(f)
    scaled = (F @ A.csr @ F).tocsr()
    scaled.setdiag(1.)

    return SparseSymMatrix(scaled, rtol=np.inf), f


def submatrix(A, V):
    """
    Principal submatrix ``A(V, V)``.

    Parameters
    ----------
    A : :class:`SparseSymMatrix`, shape (n, n)
        Symmetric matrix.
    V : array_like of int, shape (k,)
        Nonempty vertex set.

    Returns
    -------
    A_V : :class:`SparseSymMatrix`, shape (k, k)
        Rows and columns ``V`` of ``A`` in ascending order.

    """
    A = as_sym_matrix(A)
    V = as_vertex_set(V, A.n)

    if V.size == 0:
        raise ValueError('Vertex set is empty.')

    return SparseSymMatrix(A.csr[V][:, V], check_diagonal=False,
                           rtol=np.inf)


def connected_components(G, subset=None):
    """
    Connected components of the subgraph induced by ``subset``.

    Parameters
    ----------
    G : :class:`Graph`
        Graph on ``n`` vertices.
    subset : array_like of int, optional
        Nonempty vertex set (defaults to all vertices).

    Returns
    -------
    components : list of ndarray
        Sorted vertex sets, ordered by their smallest vertex. They are
        disjoint and their union equals ``subset``.

    """
    if subset is None:
        subset = np.arange(G.n)
    subset = as_vertex_set(subset, G.n)

    if subset.size == 0:
        raise ValueError('Vertex set is empty.')

    induced = G.adjacency[subset][:, subset]
    n_comp, labels = csgraph.connected_components(induced, directed=False)

    components = [subset[labels == k] for k in range(n_comp)]
    components.sort(key=lambda c: c[0])

    return components


def symmetric_permute(A, perm):
    """
    Symmetric permutation ``C = P A P^T`` with ``c[perm[i], perm[j]] =
    a[i, j]``.

    Parameters
    ----------
    A : :class:`SparseSymMatrix`, shape (n, n)
        Symmetric matrix.
    perm : array_like of int, shape (n,)
        Bijection on ``range(n)``.

    Returns
    -------
    C : :class:`SparseSymMatrix`, shape (n, n)
        Permuted matrix.

    """
    A = as_sym_matrix(A)
    perm = np.asarray(perm)

    if (perm.shape != (A.n,) or
            not np.array_equal(np.sort(perm), np.arange(A.n))):
        raise ValueError(f'Permutation is not a bijection on [0, {A.n}).')

    inverse = np.argsort(perm)
    return SparseSymMatrix(A.csr[inverse][:, inverse], rtol=np.inf,
                           check_diagonal=False)


def check_spd(A):
    """
    Check positive definiteness by a sparse ``L D L^T`` factorization.

    The factorization uses SuperLU in symmetric mode without pivoting, so
    its pivots are those of ``D``. A symmetric matrix is positive definite
    if and only if all of them are positive.

    Parameters
    ----------
    A : :class:`SparseSymMatrix`, shape (n, n)
        Symmetric matrix.

    Raises
    ------
    NotSPDError
        If a pivot is not positive or the factorization fails.

    """
    A = as_sym_matrix(A)

    try:
        lu = splu(A.csr.tocsc(), permc_spec='MMD_AT_PLUS_A',
                  diag_pivot_thresh=0.,
                  options={'SymmetricMode': True, 'Equil': False,
                           'RowPerm': 'NOROWPERM'})
    except RuntimeError as err:
        raise NotSPDError(f'Factorization failed: {err}')

    if not np.array_equal(lu.perm_r, lu.perm_c):
        raise NotSPDError('Zero pivot in the symmetric factorization.')

    pivots = lu.U.diagonal()
    bad = np.flatnonzero(~(pivots > 0.))
    if bad.size > 0:
        raise NotSPDError(f'Nonpositive pivot {pivots[bad[0]]:.3e} in the '
                          f'symmetric factorization.')
