# Copyright (C) 2025 The cbspart developers
#
# This file is part of cbspart.
#
# cbspart is released under the MIT license. See LICENSE in the root of the
# repository for full licensing details.

"""
`cbspart.eigen_utils` solves the small generalized Laplacian eigenproblems
behind the spectral bipartitioning methods. Four problem kinds are
supported:

 ============  =====================================  =====================
 Kind          Problem                                Eigenpair
 ============  =====================================  =====================
 'cbs_ratio'   ``L_w v = lambda L v``, ``v _|_ 1``    smallest
 'fiedler'     ``L v = lambda v``                     second smallest
 'mincut'      ``L_w v = lambda v``                   second smallest
 'mcut'        ``L_w v = lambda D_w v``,              smallest
               ``v _|_ 1`` in the ``D_w`` product
 ============  =====================================  =====================

The iterative solver is :func:`scipy.sparse.linalg.lobpcg`, preconditioned by
a threshold incomplete Cholesky factorization of the shifted operator
(SuperLU's incomplete LU in symmetric mode, :func:`scipy.sparse.linalg.spilu`,
scaled to a symmetric factor). The constraint ``v _|_ 1`` of the ratio
problem is imposed through the constraint block ``Y = 1``. Since ``L`` is
singular on exactly that vector, LOBPCG sees the positive definite
``L + 11^T / n``, which coincides with ``L`` on the constrained subspace.
Small problems are solved densely.

.. autosummary::
    :toctree: classes
    :template: myclass.rst

    EigProblemSpec
    EigResult
    IncompleteCholesky

.. autosummary::
    :toctree: functions

    ic_precond
    lobpcg_smallest
    rayleigh_quotient
    eigenvector_separation

"""

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import warnings
from scipy.sparse.linalg import (LinearOperator, lobpcg, spilu,
                                 spsolve_triangular)
from .config_utils import basicConfig
from .sparse_utils import as_sym_matrix

KINDS = ('cbs_ratio', 'fiedler', 'mincut', 'mcut')


class ICBreakdownError(ArithmeticError):
    """
    Raised when the incomplete Cholesky factorization meets a nonpositive
    pivot even after the allowed shift increases.

    """


class EigensolverError(RuntimeError):
    """
    Raised when an eigenproblem cannot be solved. The attribute ``steps``
    holds the step records gathered before the failure (set by the
    partitioner).

    """

    def __init__(self, message, steps=None):
        super().__init__(message)
        self.steps = [] if steps is None else list(steps)


class EigProblemSpec(object):
    """
    Description of a spectral eigenproblem and its solver settings.

    Parameters
    ----------
    kind : {'cbs_ratio', 'fiedler', 'mincut', 'mcut'}
        Problem kind.
    tol : float, optional
        Residual tolerance (defaults to ``basicConfig['eigen.tol']``).
    maxiter : int, optional
        Iteration cap (defaults to ``basicConfig['eigen.maxiter']``).
    block_size : {1, 2}, optional
        With block size 1 the trivial eigenvector is removed by a
        constraint, with block size 2 the two smallest eigenpairs are
        computed and the second one is returned. Defaults to 1 for
        ``'cbs_ratio'`` and ``'mcut'`` and to 2 otherwise. The ratio problem
        requires block size 1.
    sigma : float, optional
        Shift of the incomplete Cholesky preconditioner (defaults to
        ``basicConfig['eigen.sigma']``).
    droptol : float, optional
        Drop tolerance of the incomplete Cholesky preconditioner (defaults
        to ``basicConfig['eigen.droptol']``).
    seed : int, optional
        Seed of the random initial block (defaults to
        ``basicConfig['params.seed']``).

    """

    def __init__(self, kind, *, tol=None, maxiter=None, block_size=None,
                 sigma=None, droptol=None, seed=None):

        if kind not in KINDS:
            raise ValueError(f'Unknown eigenproblem kind "{kind}". Use one '
                             f'of {KINDS}.')

        if block_size is None:
            block_size = 1 if kind in ('cbs_ratio', 'mcut') else 2

        if block_size not in (1, 2):
            raise ValueError(f'Block size must be 1 or 2, got {block_size}.')

        if kind == 'cbs_ratio' and block_size != 1:
            raise ValueError('The ratio problem needs block size 1, its '
                             'right-hand side operator is singular.')

        self.kind = kind
        self.block_size = int(block_size)
        self.tol = basicConfig['eigen.tol'] if tol is None else float(tol)
        self.maxiter = (basicConfig['eigen.maxiter'] if maxiter is None
                        else int(maxiter))
        self.sigma = (basicConfig['eigen.sigma'] if sigma is None
                      else float(sigma))
        self.droptol = (basicConfig['eigen.droptol'] if droptol is None
                        else float(droptol))
        self.seed = basicConfig['params.seed'] if seed is None else int(seed)

        if self.tol <= 0. or self.maxiter < 1:
            raise ValueError('Tolerance must be positive and maxiter at '
                             'least 1.')

    @property
    def constrained(self):
        return self.block_size == 1

    def __repr__(self):
        return (f'EigProblemSpec(kind={self.kind!r}, '
                f'block_size={self.block_size}, tol={self.tol}, '
                f'maxiter={self.maxiter}, sigma={self.sigma}, '
                f'droptol={self.droptol}, seed={self.seed})')


class EigResult(object):
    """
    Eigenpair computed by :func:`lobpcg_smallest`.

    Attributes
    ----------
    eigenvalue : float
        Rayleigh quotient of ``eigenvector``.
    eigenvector : ndarray, shape (n,)
        Eigenvector of unit Euclidean norm.
    residual_norm : float
        ``||A v - lambda B v|| / ||v||``.
    iterations : int
        Number of LOBPCG iterations (0 for the dense path).
    converged : bool
        ``True`` if ``residual_norm`` is below the tolerance.
    history : ndarray
        Ritz value of the requested eigenpair per iteration.
    method : {'lobpcg', 'dense'}
        Solution path.
    sigma : float
        Preconditioner shift actually used (``nan`` for the dense path).

    """

    def __init__(self, eigenvalue, eigenvector, residual_norm, iterations,
                 converged, history, method, sigma=np.nan):
        self.eigenvalue = eigenvalue
        self.eigenvector = eigenvector
        self.residual_norm = residual_norm
        self.iterations = iterations
        self.converged = converged
        self.history = history
        self.method = method
        self.sigma = sigma

    def __str__(self):
        return (f'eigenvalue {self.eigenvalue:.8g}, residual '
                f'{self.residual_norm:.3e} after {self.iterations} '
                f'iterations ({self.method}, '
                f'{"converged" if self.converged else "not converged"})')


class IncompleteCholesky(LinearOperator):
    """
    Application of ``(L L^T)^{-1}`` for an incomplete Cholesky factor ``L``
    of a symmetrically permuted matrix.

    Parameters
    ----------
    factor : :class:`scipy.sparse.csr_matrix`, shape (n, n)
        Lower triangular factor with positive diagonal.
    sigma : float
        Diagonal shift the factor was computed with.
    droptol : float
        Drop tolerance the factor was computed with.
    order : ndarray, shape (n,), optional
        Symmetric ordering, ``L L^T`` approximates ``M[order][:, order]``
        (defaults to the identity).

    """

    def __init__(self, factor, sigma, droptol, order=None):
        self.factor = factor.tocsr()
        self.sigma = sigma
        self.droptol = droptol
        self.order = (np.arange(factor.shape[0]) if order is None
                      else np.asarray(order))
        self._upper = self.factor.T.tocsr()
        super().__init__(dtype=float, shape=factor.shape)

    def _matvec(self, x):
        y = spsolve_triangular(self.factor, x[self.order], lower=True)
        z = spsolve_triangular(self._upper, y, lower=False)
        out = np.empty_like(z)
        out[self.order] = z
        return out

    def _matmat(self, X):
        return self._matvec(X)

    def _adjoint(self):
        return self


def _threshold_cholesky(M, droptol):
    """
    Incomplete ``L D L^T`` factorization of a csr matrix by SuperLU in
    symmetric mode, returned as the factor ``L D^{1/2}`` and its ordering.

    """
    n = M.shape[0]
    fill_factor = 10. if droptol > 0. else max(10., float(n))

    try:
        ilu = spilu(M.tocsc(), drop_tol=droptol, fill_factor=fill_factor,
                    permc_spec='MMD_AT_PLUS_A', diag_pivot_thresh=0.,
                    options={'SymmetricMode': True, 'Equil': False,
                             'RowPerm': 'NOROWPERM'})
    except RuntimeError as err:
        raise ICBreakdownError(f'Factorization failed: {err}')

    if not np.array_equal(ilu.perm_r, ilu.perm_c):
        raise ICBreakdownError('Pivoting left the diagonal.')

    pivots = ilu.U.diagonal()
    bad = ~(np.isfinite(pivots) & (pivots > 0.))
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        raise ICBreakdownError(f'Nonpositive pivot {pivots[k]:.3e} in row '
                               f'{k}.')

    unit_lower = sp.tril(ilu.L, k=-1) + sp.identity(n)
    factor = (unit_lower @ sp.diags(np.sqrt(pivots))).tocsr()

    return factor, np.argsort(ilu.perm_c)


def ic_precond(M, droptol=None, sigma=None, retries=None):
    """
    Threshold incomplete Cholesky preconditioner of ``M + sigma I``.

    Parameters
    ----------
    M : :class:`cbspart.sparse_utils.SparseSymMatrix`, shape (n, n)
        Symmetric positive semidefinite matrix, e.g. a graph Laplacian.
    droptol : float, optional
        Factor entries smaller than ``droptol`` times the norm of their
        column of ``M + sigma I`` are dropped (defaults to
        ``basicConfig['eigen.droptol']``). Zero gives the complete
        factorization.
    sigma : float, optional
        Diagonal shift (defaults to ``basicConfig['eigen.sigma']``).
    retries : int, optional
        On breakdown the shift is multiplied by 10 and the factorization is
        repeated at most this many times (defaults to
        ``basicConfig['eigen.ic_retries']``).

    Returns
    -------
    precond : :class:`IncompleteCholesky`
        Operator applying ``(L L^T)^{-1}``.

    Raises
    ------
    ICBreakdownError
        If a nonpositive pivot occurs after all retries.

    Examples
    --------
    >>> P = ic_precond(SparseSymMatrix(np.zeros((3, 3)),
    ...                                check_diagonal=False), sigma=0.1)
    >>> P.matvec(np.ones(3))
    array([10., 10., 10.])

    """
    droptol = basicConfig['eigen.droptol'] if droptol is None else droptol
    sigma = basicConfig['eigen.sigma'] if sigma is None else sigma
    retries = basicConfig['eigen.ic_retries'] if retries is None else retries

    M = as_sym_matrix(M, check_diagonal=False)
    identity = sp.identity(M.n, format='csr')

    for attempt in range(retries + 1):
        try:
            factor, order = _threshold_cholesky(
                (M.csr + sigma*identity).tocsr(), droptol)
            return IncompleteCholesky(factor, sigma, droptol, order)

        except ICBreakdownError as err:
            if attempt == retries:
                raise ICBreakdownError(
                    f'Incomplete Cholesky failed with shift {sigma} after '
                    f'{retries} shift increases: {err}')

            new_sigma = 10.*sigma if sigma > 0. else 1e-3
            warnings.warn(f'Incomplete Cholesky broke down ({err}), '
                          f'increasing shift from {sigma} to {new_sigma}.')
            sigma = new_sigma


def _operators(spec, L_w, L, d_w):
    """Return (A, B) as sparse matrices and the base of the preconditioner."""

    if spec.kind == 'cbs_ratio':
        return L_w.csr, L.csr, L_w
    elif spec.kind == 'fiedler':
        return L.csr, None, L
    elif spec.kind == 'mincut':
        return L_w.csr, None, L_w
    else:
        return L_w.csr, sp.diags(d_w, format="csr"), L_w


def _rank_one_shift(B):
    # B + 11^T / n, positive definite for a connected graph Laplacian B
    n = B.shape[0]

    def apply(x):
        return B @ x + x.sum(axis=0, keepdims=True) / n

    return LinearOperator((n, n), matvec=apply, matmat=apply,
                          rmatvec=apply, dtype=float)


def _residual(A, B, v, lam):
    Bv = v if B is None else B @ v
    return float(np.linalg.norm(A @ v - lam*Bv) / np.linalg.norm(v))


def _rayleigh(A, B, v):
    Bv = v if B is None else B @ v
    return float(v @ (A @ v)) / float(v @ Bv)


def _solve_dense(spec, A, B, d_w):
    n = A.shape[0]
    A = A.toarray()
    B = np.eye(n) if B is None else B.toarray()

    if spec.constrained:
        y = d_w if spec.kind == 'mcut' else np.ones(n)
        Q = scipy.linalg.null_space(y[None, :])
        lam, vec = scipy.linalg.eigh(Q.T @ A @ Q, Q.T @ B @ Q,
                                     subset_by_index=[0, 0])
        v = Q @ vec[:, 0]
    else:
        lam, vec = scipy.linalg.eigh(A, B, subset_by_index=[1, 1])
        v = vec[:, 0]

    return v / np.linalg.norm(v)


def lobpcg_smallest(spec, L_w, L, d_w=None, dense_limit=None):
    """
    Solve a spectral bipartitioning eigenproblem.

    Parameters
    ----------
    spec : :class:`EigProblemSpec`
        Problem kind and solver settings.
    L_w : :class:`cbspart.sparse_utils.SparseSymMatrix`, shape (n, n)
        Weighted graph Laplacian of a connected graph.
    L : :class:`cbspart.sparse_utils.SparseSymMatrix`, shape (n, n)
        Standard graph Laplacian of the same graph.
    d_w : ndarray, shape (n,), optional
        Weighted degrees (defaults to the diagonal of ``L_w``).
    dense_limit : int, optional
        Problems with ``n`` up to this size are solved by a dense
        generalized eigensolve (defaults to
        ``basicConfig['eigen.dense_limit']``).

    Returns
    -------
    result : :class:`EigResult`
        Requested eigenpair. If the tolerance is not reached within
        ``spec.maxiter`` iterations, the best iterate is returned with
        ``converged=False`` and a warning is issued.

    Raises
    ------
    EigensolverError
        If LOBPCG breaks down.
    ICBreakdownError
        If the preconditioner cannot be built.

    """
    dense_limit = (basicConfig['eigen.dense_limit'] if dense_limit is None
                   else int(dense_limit))

    L_w = as_sym_matrix(L_w, check_diagonal=False)
    L = as_sym_matrix(L, check_diagonal=False)
    n = L.n

    if n < 2:
        raise ValueError('Eigenproblem needs at least two vertices.')

    d_w = L_w.diagonal() if d_w is None else np.asarray(d_w, dtype=float)

    A, B, base = _operators(spec, L_w, L, d_w)
    k = spec.block_size

    if n <= max(dense_limit, 5*k + 1):
        v = _solve_dense(spec, A, B, d_w)
        lam = _rayleigh(A, B, v)
        residual = _residual(A, B, v, lam)
        return EigResult(lam, v, residual, 0, True, np.array([lam]),
                         'dense')

    M = ic_precond(base, droptol=spec.droptol, sigma=spec.sigma)

    rng = np.random.default_rng(spec.seed)
    X = rng.uniform(-1., 1., size=(n, k))

    Y = np.ones((n, 1)) if spec.constrained else None
    B_op = _rank_one_shift(B) if spec.kind == 'cbs_ratio' else B

    history = []
    iterations = 0
    tol = spec.tol
    converged = False

    # restart with a tighter inner tolerance if the normalized residual
    # misses the target
    for attempt in range(3):
        try:
            with warnings.catch_warnings():
                warnings.simplefilter('ignore', UserWarning)
                lam, V, lam_history = lobpcg(
                    A, X, B=B_op, M=M, Y=Y, tol=tol,
                    maxiter=max(spec.maxiter - iterations, 1),
                    largest=False, retLambdaHistory=True)
        except (np.linalg.LinAlgError, ValueError) as err:
            raise EigensolverError(f'LOBPCG failed for the '
                                   f'{spec.kind} problem: {err}')

        lam_history = np.sort(np.asarray(lam_history, dtype=float)
                              .reshape(-1, k), axis=1)[:, k-1]
        history.extend(lam_history.tolist())
        iterations += max(lam_history.size - 1, 0)

        order = np.argsort(lam)
        v = V[:, order[k-1]]
        v = v / np.linalg.norm(v)
        value = _rayleigh(A, B, v)
        residual = _residual(A, B, v, value)

        converged = residual <= spec.tol
        if converged or iterations >= spec.maxiter:
            break

        X = V
        tol = 0.1*tol

    if not converged:
        warnings.warn(f'LOBPCG did not reach the tolerance {spec.tol} for '
                      f'the {spec.kind} problem (residual {residual:.3e} '
                      f'after {iterations} iterations).')

    return EigResult(value, v, residual, iterations, converged,
                     np.array(history), 'lobpcg', sigma=M.sigma)


def rayleigh_quotient(v, L_w, L):
    """
    Ratio ``v^T L_w v / v^T L v``.

    Raises
    ------
    ValueError
        If the denominator vanishes (e.g. for a constant vector).

    """
    v = np.asarray(v, dtype=float)
    L_w = as_sym_matrix(L_w, check_diagonal=False)
    L = as_sym_matrix(L, check_diagonal=False)

    num = float(v @ (L_w @ v))
    den = float(v @ (L @ v))

    if abs(den) <= 1e-14 * max(float(v @ v), np.finfo(float).tiny):
        raise ValueError('Denominator v^T L v vanishes.')

    return num / den


def eigenvector_separation(v, mask):
    """
    Separation of the components of ``v`` between two vertex groups.

    Parameters
    ----------
    v : ndarray, shape (n,)
        Eigenvector.
    mask : ndarray of bool, shape (n,)
        Membership of the first group (e.g. vertices inside a jump region).

    Returns
    -------
    ratio : float
        Gap between the value ranges of the two groups divided by the larger
        of the two ranges. Positive if the ranges do not overlap, infinite if
        both groups are constant and distinct.

    """
    v = np.asarray(v, dtype=float)
    mask = np.asarray(mask, dtype=bool)

    if v.shape != mask.shape:
        raise ValueError(f'Shapes {v.shape} and {mask.shape} differ.')
    if mask.all() or not mask.any():
        raise ValueError('Both groups must be nonempty.')

    inside, outside = v[mask], v[~mask]
    gap = max(outside.min() - inside.max(), inside.min() - outside.max())
    spread = max(np.ptp(inside), np.ptp(outside))

    if spread == 0.:
        return np.inf if gap > 0. else 0.

    return float(gap / spread)
