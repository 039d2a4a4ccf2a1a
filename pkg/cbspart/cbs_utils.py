# Copyright (C) 2025 The cbspart developers
#
# This file is part of cbspart.
#
# cbspart is released under the MIT license. See LICENSE in the root of the
# repository for full licensing details.

"""
`cbspart.cbs_utils` computes the strengthened Cauchy-Bunyakowski-Schwarz
(CBS) constant of a two-by-two block splitting, its three sampled lower
estimates and the condition number bound of the block-diagonal
preconditioner.

For a bipartition {I, J} of a symmetric positive definite matrix ``A`` the
CBS constant ``gamma`` is the largest singular value of
``L_I^{-1} A_IJ L_J^{-T}``, where ``A_I = L_I L_I^T`` and ``A_J = L_J L_J^T``
are Cholesky factorizations of the diagonal blocks. The block-diagonal
preconditioner ``T = blockdiag(A_I, A_J)`` then satisfies

.. math::

    \\kappa(T^{-1}A) \\leq \\frac{1 + \\gamma}{1 - \\gamma}.

The cheap estimates, with ``w(I, J)`` the sum of the normalized absolute
couplings across the split and ``|E(I, J)|`` the number of cut edges, are

* ``gamma_tilde = w(I, J) / |E(I, J)|`` (mean weight of a cut edge),
* ``gamma_bar = w(I, J) / (|I| |J|)`` (``4 w(I, J) / n**2`` for balanced
  splits),
* ``gamma_hat = (w(I, J) / w(J) + w(I, J) / w(I)) / n``.

The exact constant requires dense factorizations and is meant as an oracle
for tests and diagnostics.

.. autosummary::
    :toctree: classes
    :template: myclass.rst

    CbsReport

.. autosummary::
    :toctree: functions

    cbs_exact
    gamma_tilde
    gamma_bar
    gamma_hat
    cut_estimates
    cond_bound
    cond_measured
    cbs_report

"""

import numpy as np
import scipy.linalg
import warnings
from .config_utils import basicConfig
from .sparse_utils import (NotSPDError, as_sym_matrix, as_vertex_set,
                           diag_scale)
from .laplacian_utils import cbs_weights, cut_values


class CbsReport(object):
    """
    CBS constant, its estimates and the condition number bound of a
    bipartition.

    Attributes
    ----------
    gamma : float
        Exact CBS constant (``nan`` if the matrix exceeds the dense limit).
    gamma_tilde, gamma_bar, gamma_hat : float
        Sampled estimates.
    bound : float
        Condition number bound ``(1 + gamma) / (1 - gamma)``.
    size_I, size_J : int
        Sizes of the two sets.
    cut : int
        Number of cut edges.
    balanced : bool
        ``False`` if ``|I| != |J|``, in which case ``gamma_bar`` uses the
        unbalanced generalization ``w(I, J) / (|I| |J|)``.
    zero_cut : bool
        ``True`` if no edge connects I and J.

    """

    def __init__(self, gamma, gamma_tilde, gamma_bar, gamma_hat, bound,
                 size_I, size_J, cut):
        self.gamma = gamma
        self.gamma_tilde = gamma_tilde
        self.gamma_bar = gamma_bar
        self.gamma_hat = gamma_hat
        self.bound = bound
        self.size_I = size_I
        self.size_J = size_J
        self.cut = cut

    @property
    def balanced(self):
        return self.size_I == self.size_J

    @property
    def zero_cut(self):
        return self.cut == 0

    def to_dict(self):
        return {
            'gamma': self.gamma,
            'gamma_tilde': self.gamma_tilde,
            'gamma_bar': self.gamma_bar,
            'gamma_hat': self.gamma_hat,
            'bound': self.bound,
            'size_I': self.size_I,
            'size_J': self.size_J,
            'cut': self.cut,
            'balanced': self.balanced,
        }

    def __str__(self):
        return (f'CBS constant {self.gamma:.6g} (bound {self.bound:.6g}), '
                f'estimates tilde={self.gamma_tilde:.6g}, '
                f'bar={self.gamma_bar:.6g}, hat={self.gamma_hat:.6g}, '
                f'|I|={self.size_I}, |J|={self.size_J}, cut={self.cut}')


def _check_bipartition(n, I, J):
    I = as_vertex_set(I, n)
    J = as_vertex_set(J, n)

    if I.size == 0 or J.size == 0:
        raise ValueError('Both sets of the bipartition must be nonempty.')
    if I.size + J.size != n or np.intersect1d(I, J).size > 0:
        raise ValueError('Sets I and J must be disjoint and cover all '
                         f'{n} vertices.')
    return I, J


def cbs_exact(A, I, J, dense_limit=None):
    """
    Exact CBS constant of the splitting {I, J}.

    Parameters
    ----------
    A : :class:`cbspart.sparse_utils.SparseSymMatrix`, shape (n, n)
        Symmetric positive definite matrix.
    I, J : array_like of int
        Nonempty, disjoint vertex sets covering all vertices.
    dense_limit : int, optional
        Largest admissible ``n`` (defaults to
        ``basicConfig['oracle.dense_limit']``).

    Returns
    -------
    gamma : float
        CBS constant in [0, 1).

    Raises
    ------
    NotSPDError
        If a diagonal block is not positive definite.
    ValueError
        If the sets are invalid or ``n`` exceeds the dense limit.

    Examples
    --------
    >>> cbs_exact(SparseSymMatrix([[1., 0.5], [0.5, 1.]]), [0], [1])
    0.5

    """
    dense_limit = (basicConfig['oracle.dense_limit'] if dense_limit is None
                   else int(dense_limit))

    A = as_sym_matrix(A)
    if A.n > dense_limit:
        raise ValueError(f'Matrix size {A.n} exceeds the dense oracle limit '
                         f'{dense_limit}.')

    I, J = _check_bipartition(A.n, I, J)

    # the set holding vertex 0 comes first, which makes the result symmetric
    if J[0] < I[0]:
        I, J = J, I

    dense = A.toarray()

    try:
        L_I = scipy.linalg.cholesky(dense[np.ix_(I, I)], lower=True)
        L_J = scipy.linalg.cholesky(dense[np.ix_(J, J)], lower=True)
    except scipy.linalg.LinAlgError as err:
        raise NotSPDError(f'Diagonal block is not positive definite: {err}')

    coupling = scipy.linalg.solve_triangular(L_I, dense[np.ix_(I, J)],
                                             lower=True)
    coupling = scipy.linalg.solve_triangular(L_J, coupling.T, lower=True).T

    return float(scipy.linalg.svdvals(coupling)[0])


def _tilde(cv):
    return 0. if cv.cut == 0 else cv.w_cut / cv.cut


def _bar(cv):
    return cv.w_cut / (cv.size_I * cv.size_J)


def _hat(cv):
    if cv.w_cut == 0.:
        return 0.
    if cv.w_I == 0. or cv.w_J == 0.:
        return np.inf
    return (cv.w_cut / cv.w_J + cv.w_cut / cv.w_I) / cv.n


def gamma_tilde(G, I, J):
    """
    Mean weight of the cut edges, ``w(I, J) / |E(I, J)|``.

    Parameters
    ----------
    G : :class:`cbspart.sparse_utils.Graph`
        Graph with CBS weights (see
        :func:`cbspart.laplacian_utils.cbs_weights`).
    I, J : array_like of int
        Disjoint vertex sets covering all vertices.

    Returns
    -------
    gamma_tilde : float
        Estimate in [0, max w_ij]. Zero if no edge is cut (a warning is
        issued).

    """
    cv = cut_values(G, I, J)
    if cv.cut == 0:
        warnings.warn('Bipartition cuts no edge, gamma_tilde set to 0.')
    return _tilde(cv)


def gamma_bar(G, I, J):
    """
    Cut weight per vertex pair, ``w(I, J) / (|I| |J|)``.

    For a balanced split this is ``4 w(I, J) / n**2``. Unbalanced splits use
    the same expression as a generalization (see
    :attr:`CbsReport.balanced`) and issue a warning.

    """
    cv = cut_values(G, I, J)
    if cv.size_I != cv.size_J:
        warnings.warn(f'Unbalanced split (|I| = {cv.size_I}, |J| = '
                      f'{cv.size_J}), gamma_bar uses w(I, J) / (|I| |J|).')
    return _bar(cv)


def gamma_hat(A, I, J, diagonal=None):
    """
    Normalized-cut estimate ``(w(I, J) / w(J) + w(I, J) / w(I)) / n``.

    Parameters
    ----------
    A : :class:`cbspart.sparse_utils.SparseSymMatrix`, shape (n, n)
        Diagonally scaled (unit diagonal) symmetric matrix.
    I, J : array_like of int
        Disjoint vertex sets covering all vertices.
    diagonal : bool, optional
        Include the diagonal in ``w(I)`` and ``w(J)`` (defaults to
        ``basicConfig['params.mcut_diagonal']``).

    Returns
    -------
    gamma_hat : float
        Estimate. Infinite if a within-set sum vanishes while the cut does
        not (only possible without the diagonal).

    Raises
    ------
    ValueError
        If ``A`` does not have unit diagonal.

    Examples
    --------
    Path of four vertices with off-diagonal entries 0.5, split in the middle:
    w(I, J) = 0.5 and w(I) = w(J) = 3, hence ``gamma_hat = 1/12``.

    """
    A = as_sym_matrix(A)

    if not np.allclose(A.diagonal(), 1., rtol=0., atol=1e-12):
        raise ValueError('Matrix must have unit diagonal, use '
                         'sparse_utils.diag_scale first.')

    cv = cut_values(cbs_weights(A), I, J, diagonal=diagonal)
    return _hat(cv)


def cut_estimates(cv):
    """
    Estimates (gamma_tilde, gamma_bar, gamma_hat) from precomputed
    :class:`cbspart.laplacian_utils.CutValues` of a bipartition.

    """
    return _tilde(cv), _bar(cv), _hat(cv)


def cond_bound(gamma):
    """
    Condition number bound ``(1 + gamma) / (1 - gamma)``.

    Raises
    ------
    ValueError
        If ``gamma`` lies outside of [0, 1).

    """
    gamma = float(gamma)
    if not 0. <= gamma < 1.:
        raise ValueError(f'CBS constant {gamma} outside of [0, 1).')
    return (1. + gamma) / (1. - gamma)


def cond_measured(A, subdomains, dense_limit=None):
    """
    Condition number of the additive Schwarz preconditioned matrix.

    Parameters
    ----------
    A : :class:`cbspart.sparse_utils.SparseSymMatrix`, shape (n, n)
        Symmetric positive definite matrix.
    subdomains : list of array_like
        Vertex sets covering all vertices (may overlap).
    dense_limit : int, optional
        Largest admissible ``n`` (defaults to
        ``basicConfig['oracle.dense_limit']``).

    Returns
    -------
    kappa : float
        Ratio of the extreme eigenvalues of ``B A``, where
        ``B = sum_k E_k A_k^{-1} E_k^T``. For nonoverlapping subdomains ``B``
        is the inverse of the block-diagonal part of ``A``.

    """
    dense_limit = (basicConfig['oracle.dense_limit'] if dense_limit is None
                   else int(dense_limit))

    A = as_sym_matrix(A)
    if A.n > dense_limit:
        raise ValueError(f'Matrix size {A.n} exceeds the dense oracle limit '
                         f'{dense_limit}.')

    dense = A.toarray()
    B = np.zeros_like(dense)
    covered = np.zeros(A.n, dtype=bool)

    for V in subdomains:
        V = as_vertex_set(V, A.n)
        covered[V] = True
        try:
            B[np.ix_(V, V)] += scipy.linalg.cho_solve(
                scipy.linalg.cho_factor(dense[np.ix_(V, V)]), np.eye(V.size))
        except scipy.linalg.LinAlgError as err:
            raise NotSPDError(f'Subdomain block is not positive definite: '
                              f'{err}')

    if not np.all(covered):
        raise ValueError('Subdomains do not cover all vertices.')

    # B A is similar to the symmetric C^T A C with B = C C^T
    C = scipy.linalg.cholesky(0.5*(B + B.T), lower=True)
    eigs = scipy.linalg.eigvalsh(C.T @ dense @ C)

    return float(eigs[-1] / eigs[0])


def cbs_report(A, I, J, dense_limit=None):
    """
    Collect the CBS constant, its estimates and the bound of a bipartition.

    Parameters
    ----------
    A : :class:`cbspart.sparse_utils.SparseSymMatrix`, shape (n, n)
        Symmetric positive definite matrix (scaled internally where needed).
    I, J : array_like of int
        Nonempty, disjoint vertex sets covering all vertices.
    dense_limit : int, optional
        Matrices larger than this skip the exact constant, which is reported
        as ``nan`` (defaults to ``basicConfig['oracle.dense_limit']``).

    Returns
    -------
    report : :class:`CbsReport`

    """
    dense_limit = (basicConfig['oracle.dense_limit'] if dense_limit is None
                   else int(dense_limit))

    A = as_sym_matrix(A)
    I, J = _check_bipartition(A.n, I, J)

    scaled, _ = diag_scale(A)
    cv = cut_values(cbs_weights(scaled), I, J)

    if A.n <= dense_limit:
        gamma = cbs_exact(A, I, J, dense_limit=dense_limit)
        bound = cond_bound(min(gamma, np.nextafter(1., 0.)))
    else:
        gamma, bound = np.nan, np.nan

    return CbsReport(gamma, _tilde(cv), _bar(cv), _hat(cv), bound,
                     cv.size_I, cv.size_J, cv.cut)
