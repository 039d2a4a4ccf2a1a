# Copyright (C) 2025 The cbspart developers
#
# This file is part of cbspart.
#
# cbspart is released under the MIT license. See LICENSE in the root of the
# repository for full licensing details.

"""
`cbspart.laplacian_utils` assigns the coefficient-based edge weights to the
adjacency graph of a matrix, builds the weighted and the standard graph
Laplacians and evaluates cuts of bipartitions.

With the indicator vector ``p`` of a bipartition {I, J} (``+1`` on I, ``-1``
on J) the Laplacians measure the cut through their quadratic forms,

.. math::

    4\\,w(I, J) = p^T L_w p, \\qquad 4\\,|E(I, J)| = p^T L p.

.. autosummary::
    :toctree: classes
    :template: myclass.rst

    WeightedGraphLaplacians
    CutValues

.. autosummary::
    :toctree: functions

    cbs_weights
    build_laplacians
    cut_values
    sweep_cut_values
    indicator_vector
    is_uniform

"""

import numpy as np
import scipy.sparse as sp
from .config_utils import basicConfig
from .sparse_utils import (SparseSymMatrix, Graph, NotSPDError,
                           as_sym_matrix, as_vertex_set)


class WeightedGraphLaplacians(object):
    """
    Weighted Laplacian ``L_w = D_w - W`` and standard Laplacian
    ``L = D - Q`` of a graph.

    Attributes
    ----------
    L_w : :class:`cbspart.sparse_utils.SparseSymMatrix`
        Weighted graph Laplacian.
    L : :class:`cbspart.sparse_utils.SparseSymMatrix`
        Standard graph Laplacian.
    d_w : ndarray, shape (n,)
        Weighted degrees (diagonal of ``D_w``).
    d : ndarray, shape (n,)
        Vertex degrees (diagonal of ``D``).

    """

    def __init__(self, L_w, L, d_w, d):
        self.L_w = L_w
        self.L = L
        self.d_w = d_w
        self.d = d

    @property
    def n(self):
        return self.L.n

    def __repr__(self):
        return f'WeightedGraphLaplacians(n={self.n}, nnz={self.L.nnz})'


class CutValues(object):
    """
    Cut quantities of a bipartition {I, J}.

    Attributes
    ----------
    cut : int
        Number of edges between I and J.
    w_cut : float
        Sum of the edge weights between I and J, w(I, J).
    w_I, w_J : float
        Within-set sums of the normalized absolute entries. Off-diagonal
        pairs are counted in both orders and, if requested, the unit
        diagonal contributes one per vertex.
    size_I, size_J : int
        Number of vertices on either side.

    """

    def __init__(self, cut, w_cut, w_I, w_J, size_I, size_J):
        self.cut = int(cut)
        self.w_cut = float(w_cut)
        self.w_I = float(w_I)
        self.w_J = float(w_J)
        self.size_I = int(size_I)
        self.size_J = int(size_J)

    @property
    def n(self):
        return self.size_I + self.size_J

    def __repr__(self):
        return (f'CutValues(cut={self.cut}, w_cut={self.w_cut:.6g}, '
                f'w_I={self.w_I:.6g}, w_J={self.w_J:.6g}, '
                f'|I|={self.size_I}, |J|={self.size_J})')


def cbs_weights(A):
    """
    Coefficient-based edge weights of the adjacency graph.

    Parameters
    ----------
    A : :class:`cbspart.sparse_utils.SparseSymMatrix`, shape (n, n)
        Symmetric matrix with positive diagonal.

    Returns
    -------
    G : :class:`cbspart.sparse_utils.Graph`
        Adjacency graph of ``A`` with weights
        ``w_ij = |a_ij| / sqrt(a_ii a_jj)``.

    Raises
    ------
    NotSPDError
        If a diagonal entry is nonpositive.

    Notes
    -----
    The weights do not change under symmetric diagonal scaling of ``A``. For
    a unit-diagonal matrix they equal the absolute off-diagonal entries.

    Examples
    --------
    >>> G = cbs_weights(SparseSymMatrix([[4., 2.], [2., 4.]]))
    >>> G.weights
    array([0.5, 0.5])

    """
    A = as_sym_matrix(A)

    diag = A.diagonal()
    bad = np.flatnonzero(~(diag > 0.))
    if bad.size > 0:
        raise NotSPDError(f'Nonpositive diagonal entry a[{bad[0]}, {bad[0]}]'
                          f' = {diag[bad[0]]}.')

    coo = A.csr.tocoo()
    keep = (coo.row != coo.col) & (coo.data != 0.)
    row, col = coo.row[keep], coo.col[keep]

    f = 1. / np.sqrt(diag)
    weights = np.abs(coo.data[keep]) * (f[row] * f[col])

    W = sp.csr_matrix((weights, (row, col)), shape=A.shape)
    return Graph(W, weighted=True)


def build_laplacians(G):
    """
    Weighted and standard graph Laplacians.

    Parameters
    ----------
    G : :class:`cbspart.sparse_utils.Graph`
        Graph with nonnegative edge weights (unit weights if unweighted).

    Returns
    -------
    laplacians : :class:`WeightedGraphLaplacians`
        Laplacians with zero row sums and the pattern of ``G`` plus the
        diagonal.

    Raises
    ------
    ValueError
        If an edge weight is negative.

    """
    W = G.weight_matrix()
    if W.nnz > 0 and W.data.min() < 0.:
        raise ValueError(f'Negative edge weight {W.data.min()}.')

    Q = G.adjacency

    d_w = np.asarray(W.sum(axis=1)).ravel()
    d = np.asarray(Q.sum(axis=1)).ravel()

    L_w = _laplacian(W, d_w)
    L = _laplacian(Q, d)

    return WeightedGraphLaplacians(L_w, L, d_w, d)


def _laplacian(W, degrees):
    # assemble through COO so that zero weights stay in the pattern
    n = W.shape[0]
    coo = W.tocoo()
    diag = np.arange(n)
    rows = np.concatenate((coo.row, diag))
    cols = np.concatenate((coo.col, diag))
    data = np.concatenate((-coo.data, degrees))
    lap = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
    return SparseSymMatrix(lap, check_diagonal=False, rtol=np.inf)


def indicator_vector(I, n):
    """
    Indicator vector of a bipartition, ``+1`` on ``I`` and ``-1`` elsewhere.

    """
    I = as_vertex_set(I, n)
    p = -np.ones(n)
    p[I] = 1.
    return p


def _side_mask(G, I, J):
    I = as_vertex_set(I, G.n)
    J = as_vertex_set(J, G.n)

    if I.size + J.size != G.n:
        raise ValueError(f'Sets of size {I.size} and {J.size} do not cover '
                         f'{G.n} vertices.')

    side = np.zeros(G.n, dtype=bool)
    side[I] = True
    if np.any(side[J]):
        raise ValueError('Sets I and J are not disjoint.')

    return side


def cut_values(G, I, J, diagonal=None):
    """
    Cut size, cut weight and within-set sums of a bipartition.

    Parameters
    ----------
    G : :class:`cbspart.sparse_utils.Graph`
        Weighted graph on ``n`` vertices.
    I, J : array_like of int
        Disjoint vertex sets covering all vertices.
    diagonal : bool, optional
        If ``True``, add the unit diagonal (one per vertex) to the within-set
        sums. Defaults to ``basicConfig['params.mcut_diagonal']``.

    Returns
    -------
    values : :class:`CutValues`
        Cut quantities of {I, J}.

    Raises
    ------
    ValueError
        If ``I`` and ``J`` overlap or do not cover the vertex set.

    """
    diagonal = (basicConfig['params.mcut_diagonal'] if diagonal is None
                else bool(diagonal))

    side = _side_mask(G, I, J)
    size_I = int(np.count_nonzero(side))

    W = G.weight_matrix().tocoo()
    in_row, in_col = side[W.row], side[W.col]
    crossing = in_row != in_col

    # every edge is stored in both directions
    cut = np.count_nonzero(crossing) // 2
    w_cut = W.data[crossing].sum() / 2.
    w_I = W.data[in_row & in_col].sum()
    w_J = W.data[~in_row & ~in_col].sum()

    if diagonal:
        w_I += size_I
        w_J += G.n - size_I

    return CutValues(cut, w_cut, w_I, w_J, size_I, G.n - size_I)


def sweep_cut_values(G, order, diagonal=None):
    """
    Cut quantities of all prefix splits of a vertex ordering.

    For ``s = 0, ..., n`` the split puts the first ``s`` vertices of
    ``order`` into I and the remaining ones into J.

    Parameters
    ----------
    G : :class:`cbspart.sparse_utils.Graph`
        Weighted graph on ``n`` vertices.
    order : ndarray of int, shape (n,)
        Permutation of the vertices.
    diagonal : bool, optional
        Add the unit diagonal to the within-set sums (defaults to
        ``basicConfig['params.mcut_diagonal']``).

    Returns
    -------
    cut, w_cut, w_I, w_J : ndarray, shape (n+1,)
        Values indexed by the split position ``s``.

    """
    diagonal = (basicConfig['params.mcut_diagonal'] if diagonal is None
                else bool(diagonal))

    n = G.n
    rank = np.empty(n, dtype=np.intp)
    rank[np.asarray(order)] = np.arange(n)

    row, col, weights = G.edges()
    lo = np.minimum(rank[row], rank[col])
    hi = np.maximum(rank[row], rank[col])

    # an edge crosses the split s iff lo < s <= hi
    cut = np.cumsum(np.bincount(lo + 1, minlength=n + 2)[:n + 1]
                    - np.bincount(hi + 1, minlength=n + 2)[:n + 1])
    w_cut = np.cumsum(
        np.bincount(lo + 1, weights=weights, minlength=n + 2)[:n + 1]
        - np.bincount(hi + 1, weights=weights, minlength=n + 2)[:n + 1])

    # edges inside I once hi < s, inside J while lo >= s
    w_I = 2. * np.cumsum(
        np.bincount(hi + 1, weights=weights, minlength=n + 2)[:n + 1])
    w_J = 2. * np.cumsum(
        np.bincount(lo, weights=weights, minlength=n + 1)[:n + 1][::-1]
    )[::-1]

    if diagonal:
        sizes = np.arange(n + 1)
        w_I = w_I + sizes
        w_J = w_J + (n - sizes)

    return cut, w_cut, w_I, w_J


def is_uniform(G, rtol=None):
    """
    Check whether all edge weights are equal up to a relative spread.

    Parameters
    ----------
    G : :class:`cbspart.sparse_utils.Graph`
        Weighted graph.
    rtol : float, optional
        Largest accepted ``(max - min) / max`` (defaults to
        ``basicConfig['params.uniform_rtol']``).

    Returns
    -------
    uniform : bool
        ``True`` if the graph is unweighted, has no edges or its weights are
        uniform.

    """
    rtol = basicConfig['params.uniform_rtol'] if rtol is None else rtol

    if G.weights is None or G.weights.size == 0:
        return True

    wmax = G.weights.max()
    if wmax == 0.:
        return True

    return bool((wmax - G.weights.min()) / wmax <= rtol)
