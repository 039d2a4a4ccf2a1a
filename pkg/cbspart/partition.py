# Copyright (C) 2025 The cbspart developers
#
# This file is part of cbspart.
#
# cbspart is released under the MIT license. See LICENSE in the root of the
# repository for full licensing details.

"""
`cbspart.partition` provides the recursive spectral partitioner. Every
bipartitioning step solves the eigenproblem of the chosen method on the
subgraph of one subdomain, turns the eigenvector into a split by a candidate
sweep and keeps the connected components of both sides. Subdomains larger
than ``max_size`` are split again.

 ==========  ======================  =========================================
 Method      Eigenproblem            Objective of the candidate sweep
 ==========  ======================  =========================================
 'cbs'       ``'cbs_ratio'``         mean weight of the cut edges
 'rsb'       ``'fiedler'``           number of cut edges
 'mincut'    ``'mincut'``            cut weight per vertex pair
 'mcut'      ``'mcut'``              normalized cut weight
 ==========  ======================  =========================================

The edge weights ``|a_ij| / sqrt(a_ii a_jj)`` are assigned once on the full
matrix. If they are uniform on a subdomain, the ``'cbs'`` method has no
information to work with and falls back to the Fiedler vector and the plain
cut (flagged in the step log).

.. autosummary::
    :toctree: classes
    :template: myclass.rst

    PartitionConfig
    Bipartition
    PartitionResult

.. autosummary::
    :toctree: functions

    split_from_vector
    bipartition_step
    recursive_partition

"""

import numpy as np
import textwrap
import warnings
from collections import deque
from scipy.sparse import csgraph
from timeit import default_timer as timer
from .config_utils import (basicConfig, check_bool, check_choice,
                           check_fraction, check_positive,
                           check_positive_int)
from .sparse_utils import (DegenerateSplitError, as_sym_matrix,
                           as_vertex_set, connected_components)
from .laplacian_utils import (build_laplacians, cbs_weights, cut_values,
                              is_uniform, sweep_cut_values)
from .cbs_utils import cut_estimates
from .eigen_utils import (EigProblemSpec, EigensolverError,
                          ICBreakdownError, lobpcg_smallest)

METHODS = ('cbs', 'rsb', 'mincut', 'mcut')
EIGEN_KINDS = {
    'cbs': 'cbs_ratio',
    'rsb': 'fiedler',
    'mincut': 'mincut',
    'mcut': 'mcut',
}
OBJECTIVES = {
    'cbs': 'gamma_tilde',
    'rsb': 'cut',
    'mincut': 'gamma_bar',
    'mcut': 'gamma_hat',
}
RULES = ('sweep', 'sign', 'median')


class PartitionConfig(object):
    """
    Settings of the recursive partitioner.

    Parameters
    ----------
    method : {'cbs', 'rsb', 'mincut', 'mcut'}, optional
        Partitioning method (defaults to ``'cbs'``).
    max_size : int, optional
        Largest admissible subdomain size (defaults to
        ``basicConfig['params.max_size']``).
    load_balance : float, optional
        Smallest admissible ratio ``min(|I|/|J|, |J|/|I|)`` of a split, in
        (0, 1] (defaults to ``basicConfig['params.load_balance']``).
    candidates : int, optional
        Number of candidate splits of the sweep (defaults to
        ``basicConfig['params.candidates']``).
    split_rule : {'sweep', 'sign', 'median'}, optional
        Rule turning the eigenvector into a split (defaults to
        ``basicConfig['params.split_rule']``).
    seed : int, optional
        Seed of the random initial vectors of the eigensolver (defaults to
        ``basicConfig['params.seed']``).
    eig_tol, eig_maxiter, sigma, droptol : optional
        Eigensolver settings (see
        :class:`cbspart.eigen_utils.EigProblemSpec`).
    strict : bool, optional
        If ``True``, a non-converged eigensolve raises
        :class:`cbspart.eigen_utils.EigensolverError` instead of a warning
        (defaults to ``False``).

    """

    def __init__(self, method='cbs', *, max_size=None, load_balance=None,
                 candidates=None, split_rule=None, seed=None, eig_tol=None,
                 eig_maxiter=None, sigma=None, droptol=None, strict=False):

        def resolve(value, key, check):
            return basicConfig[key] if value is None else check(value)

        self.method = check_choice(method, METHODS)
        self.max_size = resolve(max_size, 'params.max_size',
                                check_positive_int)
        self.load_balance = resolve(load_balance, 'params.load_balance',
                                    check_fraction)
        self.candidates = resolve(candidates, 'params.candidates',
                                  check_positive_int)
        self.split_rule = resolve(split_rule, 'params.split_rule',
                                  lambda x: check_choice(x, RULES))
        self.seed = resolve(seed, 'params.seed',
                            lambda x: check_positive_int(x, strict=False))
        self.eig_tol = resolve(eig_tol, 'eigen.tol', check_positive)
        self.eig_maxiter = resolve(eig_maxiter, 'eigen.maxiter',
                                   check_positive_int)
        self.sigma = resolve(sigma, 'eigen.sigma',
                             lambda x: check_positive(x, strict=False))
        self.droptol = resolve(droptol, 'eigen.droptol',
                               lambda x: check_positive(x, strict=False))
        self.strict = check_bool(strict)

    def eigen_spec(self, kind):
        """Eigenproblem description of the given kind with these settings."""
        return EigProblemSpec(kind, tol=self.eig_tol,
                              maxiter=self.eig_maxiter, sigma=self.sigma,
                              droptol=self.droptol, seed=self.seed)

    def to_dict(self):
        return {
            'method': self.method,
            'max_size': self.max_size,
            'load_balance': self.load_balance,
            'candidates': self.candidates,
            'split_rule': self.split_rule,
            'seed': self.seed,
            'eig_tol': self.eig_tol,
            'eig_maxiter': self.eig_maxiter,
            'sigma': self.sigma,
            'droptol': self.droptol,
            'strict': self.strict,
        }

    def __repr__(self):
        args = ', '.join(f'{key}={value!r}'
                         for key, value in self.to_dict().items())
        return f'PartitionConfig({args})'


class Bipartition(object):
    """
    Split of a vertex set into two nonempty sides.

    Attributes
    ----------
    I, J : ndarray of int
        Sorted vertex indices of both sides.
    rule : str
        Rule that produced the split (``'sweep'``, ``'sign'`` or
        ``'median'``).
    objective : str or None
        Name of the objective minimized by the sweep.
    candidate : int or None
        Index of the selected candidate.
    positions : ndarray of int or None
        Split positions ``s`` of the candidates (first ``s`` vertices of the
        sorted eigenvector go to I).
    values : ndarray or None
        Objective value of every candidate.

    """

    def __init__(self, I, J, rule, objective=None, candidate=None,
                 positions=None, values=None):
        self.I = I
        self.J = J
        self.rule = rule
        self.objective = objective
        self.candidate = candidate
        self.positions = positions
        self.values = values

    @property
    def sizes(self):
        return (self.I.size, self.J.size)

    @property
    def balance(self):
        return min(self.I.size, self.J.size) / max(self.I.size, self.J.size)

    def __iter__(self):
        return iter((self.I, self.J))

    def __repr__(self):
        return (f'Bipartition(|I|={self.I.size}, |J|={self.J.size}, '
                f'rule={self.rule!r}, candidate={self.candidate})')


def _sweep_positions(n, load_balance, candidates):
    m = int(np.ceil(load_balance * n / (1. + load_balance)))
    m = min(m, n // 2)

    rest = n - 2*m
    if rest == 0:
        return np.array([m])

    l = min(candidates, rest)
    t = rest // l
    return m + t // 2 + t*np.arange(l)


def _sweep_objective(G, order, positions, method):
    cut, w_cut, w_I, w_J = sweep_cut_values(G, order)
    cut, w_cut = cut[positions], w_cut[positions]
    w_I, w_J = w_I[positions], w_J[positions]
    n = G.n

    with np.errstate(divide='ignore', invalid='ignore'):
        if method == 'cbs':
            values = np.where(cut > 0, w_cut / cut, 0.)
        elif method == 'rsb':
            values = cut.astype(float)
        elif method == 'mincut':
            values = w_cut / (positions * (n - positions))
        else:
            values = np.where(w_cut > 0.,
                              (w_cut / w_J + w_cut / w_I) / n, 0.)

    return values


def _split_sets(order, s):
    return np.sort(order[:s]), np.sort(order[s:])


def split_from_vector(v, G, load_balance=None, l=None, method='cbs',
                      rule=None):
    """
    Turn an eigenvector into a bipartition.

    Parameters
    ----------
    v : ndarray, shape (n,)
        Eigenvector, one component per vertex of ``G``.
    G : :class:`cbspart.sparse_utils.Graph`
        Weighted graph on ``n`` vertices.
    load_balance : float, optional
        Smallest admissible ratio of the side sizes, in (0, 1] (defaults to
        ``basicConfig['params.load_balance']``).
    l : int, optional
        Number of candidate splits (defaults to
        ``basicConfig['params.candidates']``).
    method : {'cbs', 'rsb', 'mincut', 'mcut'}, optional
        Method whose objective selects among the candidates (defaults to
        ``'cbs'``).
    rule : {'sweep', 'sign', 'median'}, optional
        Split rule (defaults to ``basicConfig['params.split_rule']``).

    Returns
    -------
    split : :class:`Bipartition`
        Selected split.

    Raises
    ------
    DegenerateSplitError
        If ``n < 2`` or all components of ``v`` are equal.

    Notes
    -----
    The sweep sorts ``v`` ascending (ties by vertex index), puts the ``m``
    vertices with the smallest components into I and the ``m`` largest into
    J, where ``m = ceil(n load_balance / (1 + load_balance))`` (at most
    ``n // 2``). The remaining ``n - 2m`` vertices are cut at ``l``
    positions with stride ``t = (n - 2m) // l`` (``l`` is clamped to
    ``n - 2m``). The candidate with the smallest objective wins, ties go to
    the better balanced one and then to the lower index.

    The rule ``'sign'`` puts the negative components into I, ``'median'``
    the components below the median. A rule that leaves a side empty falls
    back to the median split.

    Examples
    --------
    >>> G = Graph(np.diag([1., 1., 1.], 1) + np.diag([1., 1., 1.], -1))
    >>> split = split_from_vector([-2., -1., 1., 2.], G, load_balance=1.)
    >>> split.I, split.J
    (array([0, 1]), array([2, 3]))

    """
    load_balance = (basicConfig['params.load_balance'] if load_balance is None
                    else check_fraction(load_balance))
    l = (basicConfig['params.candidates'] if l is None
         else check_positive_int(l))
    rule = (basicConfig['params.split_rule'] if rule is None
            else check_choice(rule, RULES))
    method = check_choice(method, METHODS)

    v = np.asarray(v, dtype=float)
    n = v.size

    if n < 2:
        raise DegenerateSplitError(f'Cannot split {n} vertices.')
    if G.n != n:
        raise ValueError(f'Vector of length {n} does not match the graph '
                         f'with {G.n} vertices.')
    if not np.all(np.isfinite(v)):
        raise ValueError('Vector contains non-finite entries.')
    if np.ptp(v) == 0.:
        raise DegenerateSplitError('All vector components are equal, no '
                                   'split possible.')

    order = np.argsort(v, kind='stable')

    if rule == 'sign':
        s = int(np.count_nonzero(v < 0.))
        if 0 < s < n:
            # negative components come first in the stable order
            I, J = _split_sets(order, s)
            return Bipartition(I, J, 'sign')
        rule = 'median'

    if rule == 'median':
        I, J = _split_sets(order, n // 2)
        return Bipartition(I, J, 'median')

    positions = _sweep_positions(n, load_balance, l)
    values = _sweep_objective(G, order, positions, method)

    balance = np.minimum(positions, n - positions)
    best = int(np.lexsort((np.arange(positions.size), -balance, values))[0])

    I, J = _split_sets(order, positions[best])

    return Bipartition(I, J, 'sweep', objective=OBJECTIVES[method],
                       candidate=best, positions=positions, values=values)


def _bfs_vector(G):
    # breadth-first distances from a peripheral vertex as substitute for a
    # degenerate eigenvector
    dist = csgraph.shortest_path(G.adjacency, directed=False, unweighted=True,
                                 indices=0)
    start = int(np.argmax(np.where(np.isfinite(dist), dist, -1.)))
    dist = csgraph.shortest_path(G.adjacency, directed=False, unweighted=True,
                                 indices=start)
    return np.where(np.isfinite(dist), dist, G.n)


def bipartition_step(A, G=None, config=None, subset=None, steps=None):
    """
    One bipartitioning step on a connected subdomain.

    Parameters
    ----------
    A : :class:`cbspart.sparse_utils.SparseSymMatrix`, shape (n, n)
        Symmetric positive definite matrix.
    G : :class:`cbspart.sparse_utils.Graph`, optional
        Graph of ``A`` with CBS weights (computed from ``A`` if not given).
    config : :class:`PartitionConfig`, optional
        Partitioner settings (defaults with method ``'cbs'``).
    subset : array_like of int, optional
        Vertex set of the subdomain, whose induced subgraph must be connected
        (defaults to all vertices).
    steps : list, optional
        The step record (a dictionary) is appended to this list.

    Returns
    -------
    parts : list of ndarray
        Connected components of both sides of the split in the numbering of
        ``A``, ordered by their smallest vertex. There may be more than two.

    Raises
    ------
    EigensolverError
        If the eigensolve fails, or does not converge and ``config.strict``
        is set.
    ICBreakdownError
        If the eigensolver preconditioner cannot be built.
    DegenerateSplitError
        If the subdomain has fewer than two vertices.

    """
    config = PartitionConfig() if config is None else config
    G = cbs_weights(A) if G is None else G

    subset = (np.arange(G.n) if subset is None
              else as_vertex_set(subset, G.n))
    n = subset.size

    if n < 2:
        raise DegenerateSplitError(f'Cannot split {n} vertices.')

    sub = G.subgraph(subset)
    laplacians = build_laplacians(sub)

    fallback = config.method == 'cbs' and is_uniform(sub)
    method = 'rsb' if fallback else config.method
    kind = EIGEN_KINDS[method]

    result = lobpcg_smallest(config.eigen_spec(kind), laplacians.L_w,
                             laplacians.L, laplacians.d_w)

    if not result.converged and config.strict:
        raise EigensolverError(
            f'Eigensolver did not converge on the subdomain of size {n} '
            f'(residual {result.residual_norm:.3e}).')

    degenerate = False
    try:
        split = split_from_vector(result.eigenvector, sub,
                                  load_balance=config.load_balance,
                                  l=config.candidates, method=method,
                                  rule=config.split_rule)
    except DegenerateSplitError:
        warnings.warn(f'Eigenvector of the subdomain of size {n} is '
                      'constant, splitting by breadth-first distance.')
        degenerate = True
        split = split_from_vector(_bfs_vector(sub), sub,
                                  load_balance=config.load_balance,
                                  l=config.candidates, method=method,
                                  rule=config.split_rule)

    parts = []
    for side in split:
        parts.extend(subset[c] for c in connected_components(sub, side))
    parts.sort(key=lambda c: c[0])

    cv = cut_values(sub, split.I, split.J)
    tilde, bar, hat = cut_estimates(cv)

    if steps is not None:
        steps.append({
            'first_vertex': int(subset[0]),
            'size': int(n),
            'method': config.method,
            'kind': kind,
            'fallback': bool(fallback),
            'degenerate_vector': degenerate,
            'rule': split.rule,
            'sizes': [int(split.I.size), int(split.J.size)],
            'cut': cv.cut,
            'w_cut': cv.w_cut,
            'gamma_tilde': tilde,
            'gamma_bar': bar,
            'gamma_hat': hat,
            'n_components': len(parts),
            'component_sizes': [int(c.size) for c in parts],
            'eigenvalue': float(result.eigenvalue),
            'residual': float(result.residual_norm),
            'iterations': int(result.iterations),
            'converged': bool(result.converged),
            'eigensolver': result.method,
            'candidate': split.candidate,
            'objective': split.objective,
            'candidate_values': (None if split.values is None
                                 else split.values.tolist()),
        })

    return parts


class PartitionResult(object):
    """
    Output of :func:`recursive_partition`.

    Attributes
    ----------
    subdomains : list of ndarray
        Disjoint, connected vertex sets covering all vertices, ordered by
        their smallest vertex.
    steps : list of dict
        Record of every bipartitioning step in the order of execution.
    n : int
        Number of vertices.
    config : :class:`PartitionConfig`
        Settings used.
    disconnected : bool
        ``True`` if the graph of the input matrix was not connected.
    seconds : float
        Wall-clock time of the partitioning.

    """

    def __init__(self, subdomains, steps, n, config, disconnected=False,
                 seconds=np.nan):
        self.subdomains = subdomains
        self.steps = steps
        self.n = n
        self.config = config
        self.disconnected = disconnected
        self.seconds = seconds

    @property
    def n_subdomains(self):
        return len(self.subdomains)

    @property
    def sizes(self):
        return np.array([V.size for V in self.subdomains], dtype=int)

    @property
    def fallbacks(self):
        """Number of steps that used the uniform-weight fallback."""
        return sum(step['fallback'] for step in self.steps)

    @property
    def unconverged(self):
        """Number of steps whose eigensolve missed the tolerance."""
        return sum(not step['converged'] for step in self.steps)

    def labels(self):
        """Subdomain index of every vertex."""
        labels = np.empty(self.n, dtype=int)
        for k, V in enumerate(self.subdomains):
            labels[V] = k
        return labels

    def summary(self):
        sizes = self.sizes
        return {
            'n': self.n,
            'n_subdomains': self.n_subdomains,
            'min_size': int(sizes.min()),
            'max_size': int(sizes.max()),
            'steps': len(self.steps),
            'fallbacks': self.fallbacks,
            'unconverged': self.unconverged,
            'disconnected': self.disconnected,
        }

    def to_dict(self):
        return {
            'config': self.config.to_dict(),
            'summary': self.summary(),
            'subdomains': [V.tolist() for V in self.subdomains],
            'steps': self.steps,
        }

    def __str__(self):
        summary = self.summary()
        return textwrap.dedent(f"""\
            Partition of {self.n} vertices ({self.config.method} method)
              subdomains:  {summary['n_subdomains']} (sizes \
{summary['min_size']} to {summary['max_size']})
              steps:       {summary['steps']} ({summary['fallbacks']} \
fallbacks, {summary['unconverged']} not converged)
              max_size:    {self.config.max_size}
              connected:   {not self.disconnected}""")


def recursive_partition(A, config=None):
    """
    Recursive spectral partitioning of the adjacency graph of a matrix.

    Parameters
    ----------
    A : :class:`cbspart.sparse_utils.SparseSymMatrix`, shape (n, n)
        Symmetric positive definite matrix.
    config : :class:`PartitionConfig`, optional
        Partitioner settings (defaults with method ``'cbs'``).

    Returns
    -------
    result : :class:`PartitionResult`
        Every subdomain has at most ``config.max_size`` vertices.

    Raises
    ------
    EigensolverError
        If a bipartitioning step fails. The attribute ``steps`` holds the
        records of the steps completed before.

    Warns
    -----
    UserWarning
        If the graph is disconnected (its components are partitioned
        separately) or an eigensolve does not converge.

    Examples
    --------
    .. code-block:: python

      import cbspart as cb

      spec = cb.model_problem('square-jump-ab')
      A = cb.fd_diffusion(spec)

      result = cb.recursive_partition(
          A, cb.PartitionConfig('cbs', max_size=spec.max_size))
      print(result)

    """
    config = PartitionConfig() if config is None else config
    A = as_sym_matrix(A)

    s = timer()
    G = cbs_weights(A)

    components = connected_components(G)
    disconnected = len(components) > 1
    if disconnected:
        warnings.warn(f'Matrix graph has {len(components)} connected '
                      'components, partitioning them separately.')

    queue = deque(components)
    subdomains = []
    steps = []

    while queue:
        V = queue.popleft()
        if V.size <= config.max_size:
            subdomains.append(V)
            continue

        try:
            queue.extend(bipartition_step(A, G, config, subset=V,
                                          steps=steps))
        except (EigensolverError, ICBreakdownError) as err:
            raise EigensolverError(
                f'Partitioning stopped after {len(steps)} steps: {err}',
                steps=steps) from err

    subdomains.sort(key=lambda V: V[0])
    e = timer()

    return PartitionResult(subdomains, steps, A.n, config, disconnected,
                           seconds=e - s)
