# Copyright (C) 2025 The cbspart developers
#
# This file is part of cbspart.
#
# cbspart is released under the MIT license. See LICENSE in the root of the
# repository for full licensing details.

"""
`cbspart.solver_utils` provides the one-level additive Schwarz preconditioner
and the preconditioned conjugate gradient (PCG) driver used to compare
partitions by iteration counts.

The additive Schwarz preconditioner of a cover {V_1, ..., V_s} of the
vertices applies

.. math::

    B r = \\sum_k E_k A_k^{-1} E_k^T r, \\qquad A_k = A(V_k, V_k),

where ``E_k`` injects a vector on ``V_k`` into the full index range. All
corrections are added without weighting, also on overlapping vertices.

.. autosummary::
    :toctree: classes
    :template: myclass.rst

    AsPreconditioner
    SolveReport

.. autosummary::
    :toctree: functions

    expand_overlap
    as_apply
    pcg
    solve_partitioned

"""

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import LinearOperator, aslinearoperator, splu
from timeit import default_timer as timer
from .config_utils import basicConfig
from .sparse_utils import (SparseSymMatrix, Graph, NotSPDError,
                           as_sym_matrix, as_vertex_set, diag_scale,
                           submatrix)


def expand_overlap(subdomains, G, layers):
    """
    Grow every subdomain by layers of neighboring vertices.

    Parameters
    ----------
    subdomains : list of array_like
        Vertex sets.
    G : :class:`cbspart.sparse_utils.Graph`
        Adjacency graph.
    layers : int
        Number of rounds, each adding all neighbors of the current members.

    Returns
    -------
    expanded : list of ndarray
        Sorted vertex sets in the input order (unchanged for ``layers=0``).

    """
    layers = int(layers)
    if layers < 0:
        raise ValueError(f'Number of layers must be nonnegative, got '
                         f'{layers}.')

    expanded = []
    for V in subdomains:
        V = as_vertex_set(V, G.n)
        member = np.zeros(G.n, dtype=bool)
        member[V] = True
        for _ in range(layers):
            member |= (G.adjacency @ member.astype(float)) > 0.
        expanded.append(np.flatnonzero(member))

    return expanded


class _DenseCholesky(object):

    def __init__(self, block):
        try:
            self.factor = scipy.linalg.cho_factor(block.toarray(), lower=True)
        except scipy.linalg.LinAlgError as err:
            raise NotSPDError(f'Subdomain matrix is not positive definite: '
                              f'{err}')

    def solve(self, r):
        return scipy.linalg.cho_solve(self.factor, r)


class _SparseFactor(object):

    def __init__(self, block):
        # symmetric mode with diagonal pivots is LDL^T on a fill-reducing
        # ordering of A + A^T
        try:
            self.factor = splu(block.csr.tocsc(),
                               permc_spec='MMD_AT_PLUS_A',
                               diag_pivot_thresh=0.,
                               options=dict(SymmetricMode=True))
        except RuntimeError as err:
            raise NotSPDError(f'Subdomain matrix is singular: {err}')

        if not np.all(self.factor.U.diagonal() > 0.):
            raise NotSPDError('Subdomain matrix is not positive definite.')

    def solve(self, r):
        return self.factor.solve(r)


class AsPreconditioner(LinearOperator):
    """
    One-level additive Schwarz preconditioner.

    Parameters
    ----------
    A : :class:`cbspart.sparse_utils.SparseSymMatrix`, shape (n, n)
        Symmetric positive definite matrix.
    subdomains : list of array_like
        Vertex sets covering all vertices.
    overlap : int, optional
        Number of layers added to every subdomain before factorization
        (defaults to ``basicConfig['solver.overlap']``).
    dense_limit : int, optional
        Subdomains up to this size are factored with dense Cholesky, larger
        ones with a sparse factorization on a minimum degree ordering
        (defaults to ``basicConfig['solver.dense_limit']``).

    Attributes
    ----------
    subdomains : list of ndarray
        Subdomains after overlap expansion.
    overlap : int
        Number of overlap layers.

    Raises
    ------
    ValueError
        If the subdomains do not cover all vertices.
    NotSPDError
        If a subdomain matrix cannot be factored.

    """

    def __init__(self, A, subdomains, overlap=None, dense_limit=None):

        overlap = basicConfig['solver.overlap'] if overlap is None else overlap
        dense_limit = (basicConfig['solver.dense_limit'] if dense_limit is None
                       else dense_limit)

        A = as_sym_matrix(A)

        subdomains = [as_vertex_set(V, A.n) for V in subdomains]
        if overlap > 0:
            subdomains = expand_overlap(subdomains, Graph.from_matrix(A),
                                        overlap)

        covered = np.zeros(A.n, dtype=bool)
        for V in subdomains:
            if V.size == 0:
                raise ValueError('Subdomains must be nonempty.')
            covered[V] = True
        if not np.all(covered):
            raise ValueError(f'Subdomains miss {np.count_nonzero(~covered)} '
                             f'of {A.n} vertices.')

        self.subdomains = subdomains
        self.overlap = int(overlap)
        self.solvers = []
        for V in subdomains:
            block = submatrix(A, V)
            if V.size <= dense_limit:
                self.solvers.append(_DenseCholesky(block))
            else:
                self.solvers.append(_SparseFactor(block))

        super().__init__(dtype=float, shape=A.shape)

    @property
    def n_subdomains(self):
        return len(self.subdomains)

    def _matvec(self, r):
        w = np.zeros(r.shape)
        # fixed summation order
        for V, solver in zip(self.subdomains, self.solvers):
            w[V] += solver.solve(r[V])
        return w

    def _matmat(self, R):
        return self._matvec(R)

    def _adjoint(self):
        return self


def as_apply(prec, r):
    """
    Apply the additive Schwarz preconditioner, ``w = sum_k E_k A_k^{-1}
    E_k^T r``.

    """
    return prec.matvec(np.asarray(r, dtype=float))


class SolveReport(object):
    """
    Outcome of a PCG run.

    Attributes
    ----------
    iterations : int
        Number of PCG iterations.
    converged : bool
        ``True`` if the relative residual reached the tolerance.
    history : ndarray, shape (iterations+1,)
        Relative residual norms ``||r_k|| / ||b||`` of the updated residuals
        ``r_k`` (equal to ``b - A x_k`` in exact arithmetic), starting with
        the initial guess.
    x : ndarray, shape (n,)
        Final iterate.
    true_residual : float
        ``||b - A x|| / ||b||`` of the final iterate.
    seconds : float
        Wall-clock time of the iteration.
    meta : dict
        Partition metadata (matrix, n, method, s, max_size, load_balance,
        overlap, seed).

    """

    columns = ['matrix', 'n', 'method', 's', 'overlap', 'iterations',
               'converged', 'seconds']

    def __init__(self, iterations, converged, history, x, true_residual,
                 seconds, meta=None):
        self.iterations = iterations
        self.converged = converged
        self.history = history
        self.x = x
        self.true_residual = true_residual
        self.seconds = seconds
        self.meta = {} if meta is None else dict(meta)

    def to_row(self):
        """CSV row as dictionary with the keys in :attr:`columns`."""
        row = {key: self.meta.get(key) for key in self.columns}
        row['n'] = self.meta.get('n', self.x.size)
        row['iterations'] = self.iterations
        row['converged'] = self.converged
        row['seconds'] = self.seconds
        return row

    def __str__(self):
        return (f'PCG {"converged" if self.converged else "stopped"} after '
                f'{self.iterations} iterations, relative residual '
                f'{self.history[-1]:.3e} ({self.seconds:.3f} seconds)')


def _as_operator(M):
    if M is None:
        return None
    if isinstance(M, SparseSymMatrix):
        return aslinearoperator(M.csr)
    if isinstance(M, LinearOperator):
        return M
    if callable(M):
        return _CallableOperator(M)
    return aslinearoperator(M)


class _CallableOperator(object):

    def __init__(self, func):
        self.func = func

    def matvec(self, x):
        return self.func(x)


def pcg(A, b, prec=None, tol=None, maxit=None, seed=None, x0=None,
        verbose=False, meta=None):
    """
    Preconditioned conjugate gradient method.

    Parameters
    ----------
    A : :class:`cbspart.sparse_utils.SparseSymMatrix` or sparse matrix
        Symmetric positive definite matrix, shape (n, n).
    b : ndarray, shape (n,)
        Right-hand side.
    prec : LinearOperator or callable, optional
        Symmetric positive definite preconditioner (identity if ``None``).
    tol : float, optional
        Relative residual tolerance (defaults to
        ``basicConfig['solver.tol']``).
    maxit : int, optional
        Iteration cap (defaults to ``basicConfig['solver.maxiter']``).
    seed : int, optional
        Seed of the random initial guess with entries uniform in (-1, 1)
        (defaults to ``basicConfig['params.seed']``).
    x0 : ndarray, shape (n,), optional
        Initial guess. Replaces the random initial guess.
    verbose : bool, optional
        Print the relative residual of every iteration.
    meta : dict, optional
        Metadata attached to the report.

    Returns
    -------
    report : :class:`SolveReport`

    Raises
    ------
    NotSPDError
        If a nonpositive curvature ``p^T A p`` or a nonpositive ``r^T B r``
        of the preconditioner is met.

    """
    tol = basicConfig['solver.tol'] if tol is None else float(tol)
    maxit = basicConfig['solver.maxiter'] if maxit is None else int(maxit)
    seed = basicConfig['params.seed'] if seed is None else seed

    A_op = aslinearoperator(A.csr if isinstance(A, SparseSymMatrix) else A)
    M = _as_operator(prec)

    b = np.asarray(b, dtype=float)
    n = b.size

    if x0 is None:
        x = np.random.default_rng(seed).uniform(-1., 1., size=n)
    else:
        x = np.array(x0, dtype=float)

    s = timer()

    bnorm = np.linalg.norm(b)
    if bnorm == 0.:
        x = np.zeros(n)
        return SolveReport(0, True, np.zeros(1), x, 0., timer() - s, meta)

    r = b - A_op.matvec(x)
    history = [np.linalg.norm(r) / bnorm]
    converged = history[0] <= tol
    iterations = 0

    if not converged:
        z = r if M is None else M.matvec(r)
        rz = r @ z
        if not rz > 0.:
            raise NotSPDError(f'Preconditioner is not positive definite '
                              f'(r^T B r = {rz:.3e}).')
        p = z.copy()

    while not converged and iterations < maxit:
        iterations += 1

        Ap = A_op.matvec(p)
        curvature = p @ Ap
        if not curvature > 0.:
            raise NotSPDError(f'Matrix is not positive definite, p^T A p = '
                              f'{curvature:.3e} in iteration {iterations}.')

        alpha = rz / curvature
        x += alpha*p
        r -= alpha*Ap

        history.append(np.linalg.norm(r) / bnorm)
        if verbose:
            print(f'{iterations}: relres = {history[-1]:.6e}')

        if history[-1] <= tol:
            converged = True
            break

        z = r if M is None else M.matvec(r)
        rz_new = r @ z
        if not rz_new > 0.:
            raise NotSPDError(f'Preconditioner is not positive definite '
                              f'(r^T B r = {rz_new:.3e}) in iteration '
                              f'{iterations}.')
        p = z + (rz_new / rz)*p
        rz = rz_new

    e = timer()

    true_residual = np.linalg.norm(b - A_op.matvec(x)) / bnorm

    return SolveReport(iterations, converged, np.array(history), x,
                       float(true_residual), e - s, meta)


def solve_partitioned(A, subdomains, *, overlap=None, tol=None, maxit=None,
                      seed=None, scale=True, meta=None):
    """
    Solve a random system with PCG preconditioned by additive Schwarz.

    Parameters
    ----------
    A : :class:`cbspart.sparse_utils.SparseSymMatrix`, shape (n, n)
        Symmetric positive definite matrix.
    subdomains : list of array_like or None
        Partition of the vertices. ``None`` runs unpreconditioned CG.
    overlap : int, optional
        Overlap layers (defaults to ``basicConfig['solver.overlap']``).
    tol, maxit : optional
        PCG tolerance and iteration cap (see :func:`pcg`).
    seed : int, optional
        Seed of the right-hand side and the initial guess (defaults to
        ``basicConfig['params.seed']``).
    scale : bool, optional
        Solve the diagonally scaled system (default).
    meta : dict, optional
        Metadata attached to the report.

    Returns
    -------
    report : :class:`SolveReport`

    Notes
    -----
    The right-hand side has entries uniform in (-1, 1) and is normalized to
    unit norm. The initial guess is drawn from the same random generator.

    """
    overlap = basicConfig['solver.overlap'] if overlap is None else overlap
    seed = basicConfig['params.seed'] if seed is None else seed

    A = as_sym_matrix(A)
    if scale:
        A, _ = diag_scale(A)

    rng = np.random.default_rng(seed)
    b = rng.uniform(-1., 1., size=A.n)
    b /= np.linalg.norm(b)
    x0 = rng.uniform(-1., 1., size=A.n)

    if subdomains is None:
        prec = None
        s = 0
    else:
        prec = AsPreconditioner(A, subdomains, overlap=overlap)
        s = prec.n_subdomains

    info = {'n': A.n, 's': s, 'overlap': 0 if prec is None else overlap,
            'seed': seed}
    info.update({} if meta is None else meta)

    return pcg(A, b, prec, tol=tol, maxit=maxit, x0=x0, meta=info)
