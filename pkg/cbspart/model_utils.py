# Copyright (C) 2025 The cbspart developers
#
# This file is part of cbspart.
#
# cbspart is released under the MIT license. See LICENSE in the root of the
# repository for full licensing details.

"""
`cbspart.model_utils` generates the two-dimensional diffusion test problems

.. math::

    -\\frac{\\partial}{\\partial x}\\left(a(x, y)
    \\frac{\\partial u}{\\partial x}\\right)
    - \\frac{\\partial}{\\partial y}\\left(b(x, y)
    \\frac{\\partial u}{\\partial y}\\right) = f

on the unit square with zero Dirichlet boundary conditions, discretized by
the 5-point finite difference stencil in flux form on a uniform grid. The
coefficients are piecewise constant: a jump value inside a jump region and
one outside of it. Two jump regions are available, the square
(0.25, 0.75)^2 (``'square'``) and the black cells of a 5-by-5 checkerboard
(``'checker'``, cell (i, j) is black if i + j is even).

.. autosummary::
    :toctree: classes
    :template: myclass.rst

    DiffusionSpec

.. autosummary::
    :toctree: functions

    model_problem
    fd_diffusion
    grid_coordinates
    jump_region
    grid_plot_data

"""

import numpy as np
import pandas as pd
import scipy.sparse as sp
from .sparse_utils import SparseSymMatrix

GEOMETRIES = ('square', 'checker')
FACE_MEANS = ('arithmetic', 'harmonic')
SAMPLINGS = ('node', 'midpoint')

# preset name: (geometry, jump_a, jump_b, recommended max_size)
MODEL_PROBLEMS = {
    'constant': ('square', 1., 1., 50),
    'square-jump-ab': ('square', 100., 100., 190),
    'square-jump-a': ('square', 100., 1., 50),
    'checker-ab': ('checker', 100., 100., 50),
    'checker-a': ('checker', 100., 1., 50),
}


class DiffusionSpec(object):
    """
    Description of a diffusion model problem.

    Parameters
    ----------
    grid : int, optional
        Number of interior grid points per side (defaults to 20, hence
        ``n = 400`` unknowns). The grid spacing is ``h = 1 / (grid + 1)``.
    geometry : {'square', 'checker'}, optional
        Jump region (defaults to ``'square'``).
    jump_a : float, optional
        Value of ``a`` inside the jump region (defaults to 100).
    jump_b : float, optional
        Value of ``b`` inside the jump region (defaults to ``jump_a``). Use 1
        for a jump in ``a`` only.
    face : {'arithmetic', 'harmonic'}, optional
        Mean of the two node values used as coefficient on a cell face
        (defaults to ``'arithmetic'``).
    sampling : {'node', 'midpoint'}, optional
        Sample the coefficients at the grid nodes and average them on the
        faces (default) or sample them directly at the face midpoints.
    name : str, optional
        Name of the problem.
    max_size : int, optional
        Recommended largest subdomain size (defaults to 50).

    """

    def __init__(self, grid=20, geometry='square', jump_a=100., jump_b=None,
                 face='arithmetic', sampling='node', name=None,
                 max_size=None):

        if int(grid) < 2:
            raise ValueError(f'Grid must have at least 2 points per side, '
                             f'got {grid}.')
        if geometry not in GEOMETRIES:
            raise ValueError(f'Unknown geometry "{geometry}". Use one of '
                             f'{GEOMETRIES}.')
        if face not in FACE_MEANS:
            raise ValueError(f'Unknown face mean "{face}". Use one of '
                             f'{FACE_MEANS}.')
        if sampling not in SAMPLINGS:
            raise ValueError(f'Unknown sampling "{sampling}". Use one of '
                             f'{SAMPLINGS}.')

        jump_b = jump_a if jump_b is None else jump_b
        if not (jump_a > 0. and jump_b > 0.):
            raise ValueError('Coefficient values must be positive.')

        self.grid = int(grid)
        self.geometry = geometry
        self.jump_a = float(jump_a)
        self.jump_b = float(jump_b)
        self.face = face
        self.sampling = sampling
        self.name = 'diffusion' if name is None else str(name)
        self.max_size = 50 if max_size is None else int(max_size)

    @property
    def n(self):
        return self.grid**2

    @property
    def h(self):
        return 1. / (self.grid + 1)

    def to_dict(self):
        return {
            'model': self.name, 'grid': self.grid, 'geometry': self.geometry,
            'jump_a': self.jump_a, 'jump_b': self.jump_b, 'face': self.face,
            'sampling': self.sampling,
        }

    def __repr__(self):
        return (f'DiffusionSpec(grid={self.grid}, geometry={self.geometry!r},'
                f' jump_a={self.jump_a}, jump_b={self.jump_b}, '
                f'face={self.face!r}, sampling={self.sampling!r})')


def model_problem(name, grid=None, **kwargs):
    """
    Named model problem.

    Parameters
    ----------
    name : {'constant', 'square-jump-ab', 'square-jump-a', 'checker-ab', \
'checker-a'}
        Preset: constant coefficients, jumps of 100 in ``a`` and ``b`` or in
        ``a`` only, inside the square or on the checkerboard.
    grid : int, optional
        Interior points per side (defaults to 20).
    **kwargs : keywords
        Further arguments passed to :class:`DiffusionSpec` (``face``,
        ``sampling``).

    Returns
    -------
    spec : :class:`DiffusionSpec`
        Problem description with the recommended ``max_size`` (190 for
        ``'square-jump-ab'``, 50 otherwise).

    """
    try:
        geometry, jump_a, jump_b, max_size = MODEL_PROBLEMS[name]
    except KeyError:
        raise ValueError(f'Unknown model problem "{name}". Use one of '
                         f'{sorted(MODEL_PROBLEMS)}.')

    grid = 20 if grid is None else grid

    return DiffusionSpec(grid, geometry, jump_a, jump_b, name=name,
                         max_size=max_size, **kwargs)


def jump_region(spec, x, y):
    """
    Membership of the points ``(x, y)`` in the jump region (strict
    inequalities for the square).

    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)

    if spec.geometry == 'square':
        return (0.25 < x) & (x < 0.75) & (0.25 < y) & (y < 0.75)

    cx = np.clip(np.floor(5.*x), 0, 4).astype(int)
    cy = np.clip(np.floor(5.*y), 0, 4).astype(int)
    return (cx + cy) % 2 == 0


def _coefficients(spec, x, y):
    inside = jump_region(spec, x, y)
    a = np.where(inside, spec.jump_a, 1.)
    b = np.where(inside, spec.jump_b, 1.)
    return a, b


def _face_mean(spec, left, right):
    if spec.face == 'arithmetic':
        return 0.5*(left + right)
    return 2.*left*right / (left + right)


def grid_coordinates(grid):
    """
    Coordinates of the interior grid nodes in vertex order (``x`` runs
    fastest, vertex ``k = j * grid + i`` sits at ``((i+1) h, (j+1) h)``).

    Returns
    -------
    x, y : ndarray, shape (grid**2,)

    """
    t = np.arange(1, grid + 1) / (grid + 1)
    x, y = np.meshgrid(t, t)
    return x.ravel(), y.ravel()


def fd_diffusion(spec):
    """
    Assemble the 5-point finite difference matrix of a model problem.

    Parameters
    ----------
    spec : :class:`DiffusionSpec`
        Model problem.

    Returns
    -------
    A : :class:`cbspart.sparse_utils.SparseSymMatrix`, shape (n, n)
        Symmetric positive definite matrix with ``n = grid**2``. Row ``k``
        holds ``(a_e + a_w + b_n + b_s) / h**2`` on the diagonal and
        ``-a_e / h**2``, ... for the neighbors, where ``a_e`` etc. are the
        coefficients on the four cell faces around node ``k``.

    Examples
    --------
    Constant coefficients give the standard Laplacian with 4/h^2 on the
    diagonal and -1/h^2 off the diagonal.

    >>> spec = DiffusionSpec(grid=3, jump_a=1., jump_b=1.)
    >>> fd_diffusion(spec).toarray()[0, :2] * spec.h**2
    array([ 4., -1.])

    """
    N = spec.grid
    inv_h2 = float((N + 1)**2)

    # node coordinates including the boundary, indexed [j, i]
    t = np.arange(N + 2) / (N + 1)
    X, Y = np.meshgrid(t, t)

    if spec.sampling == 'node':
        a, b = _coefficients(spec, X, Y)
        face_a = _face_mean(spec, a[:, :-1], a[:, 1:])  # (N+2, N+1)
        face_b = _face_mean(spec, b[:-1, :], b[1:, :])  # (N+1, N+2)
    else:
        face_a, _ = _coefficients(spec, 0.5*(X[:, :-1] + X[:, 1:]), Y[:, :-1])
        _, face_b = _coefficients(spec, X[:-1, :], 0.5*(Y[:-1, :] + Y[1:, :]))

    east = face_a[1:-1, 1:]
    west = face_a[1:-1, :-1]
    north = face_b[1:, 1:-1]
    south = face_b[:-1, 1:-1]

    index = np.arange(N*N).reshape(N, N)

    diag = ((east + west + north + south) * inv_h2).ravel()
    horizontal = -(east[:, :-1] * inv_h2).ravel()
    vertical = -(north[:-1, :] * inv_h2).ravel()

    h_left, h_right = index[:, :-1].ravel(), index[:, 1:].ravel()
    v_low, v_up = index[:-1, :].ravel(), index[1:, :].ravel()

    rows = np.concatenate((index.ravel(), h_left, h_right, v_low, v_up))
    cols = np.concatenate((index.ravel(), h_right, h_left, v_up, v_low))
    data = np.concatenate((diag, horizontal, horizontal, vertical, vertical))

    A = sp.csr_matrix((data, (rows, cols)), shape=(N*N, N*N))

    return SparseSymMatrix(A)


def _labels(partition, n):
    if hasattr(partition, 'labels'):
        return np.asarray(partition.labels())

    partition = list(partition) if not isinstance(
        partition, np.ndarray) else partition

    if isinstance(partition, np.ndarray) and partition.ndim == 1 \
            and partition.size == n and np.issubdtype(partition.dtype,
                                                      np.integer):
        return partition

    labels = -np.ones(n, dtype=int)
    for k, V in enumerate(partition):
        V = np.asarray(V, dtype=int)
        if V.size and (V.min() < 0 or V.max() >= n):
            raise ValueError(f'Vertex index out of range [0, {n}).')
        labels[V] = k

    return labels


def grid_plot_data(partition, spec):
    """
    Per-node table of a partition of a model problem for external plotting.

    Parameters
    ----------
    partition : :class:`cbspart.partition.PartitionResult`, list of \
array_like or ndarray
        Partition result, list of subdomains or array of subdomain ids per
        vertex.
    spec : :class:`DiffusionSpec`
        Model problem the partition belongs to.

    Returns
    -------
    df : dataframe
        Pandas dataframe with the columns {'vertex', 'x', 'y', 'subdomain',
        'in_jump'}.

    Raises
    ------
    ValueError
        If the partition does not cover exactly ``grid**2`` vertices.

    """
    n = spec.n

    if hasattr(partition, 'labels'):
        size = sum(len(V) for V in partition.subdomains)
    elif isinstance(partition, np.ndarray) and partition.ndim == 1:
        size = partition.size
    else:
        size = sum(len(V) for V in partition)

    if size != n:
        raise ValueError(f'Partition covers {size} vertices, the model '
                         f'problem has {n}.')

    labels = _labels(partition, n)
    if np.any(labels < 0):
        raise ValueError('Partition does not cover every grid node.')

    x, y = grid_coordinates(spec.grid)

    return pd.DataFrame({
        'vertex': np.arange(n),
        'x': x,
        'y': y,
        'subdomain': labels,
        'in_jump': jump_region(spec, x, y),
    })
