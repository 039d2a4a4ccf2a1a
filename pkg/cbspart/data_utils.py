# Copyright (C) 2025 The cbspart developers
#
# This file is part of cbspart.
#
# cbspart is released under the MIT license. See LICENSE in the root of the
# repository for full licensing details.

"""
`cbspart.data_utils` provides functions for loading and writing matrices,
partitions, step logs and result tables.

Every file written by cbspart starts with a header that echoes the resolved
configuration of the run, one ``# key: value`` line per parameter (the JSON
step log stores the same information under the key ``'config'``).

.. autosummary::
    :toctree: functions

    load_mtxfile
    save_mtxfile
    matrix_name
    load_partition_file
    save_partition_file
    save_steplog_file
    load_steplog_file
    save_table
    load_table
    format_header
    reference_iterations

"""

import json
import os
import numpy as np
import pandas as pd
import scipy.io
import scipy.sparse
from .config_utils import json_default
from .sparse_utils import SparseSymMatrix, as_vertex_set

# published PCG-AS iteration counts, keyed by (matrix name, overlap layers)
REFERENCE_ITERATIONS = {
    ('bcsstk13', 0): {'cbs': 663, 'mincut': 683, 'mcut': 636, 'rsb': 889},
    ('bcsstk14', 0): {'cbs': 147, 'mincut': 204, 'mcut': 187, 'rsb': 290},
    ('bcsstk15', 0): {'cbs': 245, 'mincut': 265, 'mcut': 283, 'rsb': 337},
    ('bcsstk13', 2): {'cbs': 111, 'mincut': 135, 'mcut': 128, 'rsb': 142},
    ('bcsstk14', 2): {'cbs': 49, 'mincut': 52, 'mcut': 58, 'rsb': 54},
    ('bcsstk15', 2): {'cbs': 85, 'mincut': 98, 'mcut': 107, 'rsb': 106},
    ('bcsstk27', 2): {'cbs': 29, 'mincut': 62, 'mcut': 54, 'rsb': 61},
    ('ex3', 2): {'cbs': 76, 'mincut': 109, 'mcut': 100, 'rsb': 119},
    ('ex10hs', 2): {'cbs': 49, 'mincut': 60, 'mcut': 60, 'rsb': 66},
    ('ex15', 2): {'cbs': 78, 'mincut': 115, 'mcut': 117, 'rsb': 124},
    ('ex33', 2): {'cbs': 44, 'mincut': 107, 'mcut': 68, 'rsb': 104},
}

# matrix dimensions of the reference matrices
REFERENCE_SIZES = {
    'bcsstk13': 2003, 'bcsstk14': 1806, 'bcsstk15': 3948, 'bcsstk27': 1224,
    'ex3': 1821, 'ex10hs': 2548, 'ex15': 6867, 'ex33': 1733,
}


def matrix_name(filepath):
    """
    Name of a matrix file without directory and extensions.

    >>> matrix_name('data/bcsstk14.mtx.gz')
    'bcsstk14'

    """
    name = os.path.basename(str(filepath))
    for ext in ('.gz', '.bz2', '.mtx'):
        if name.lower().endswith(ext):
            name = name[:-len(ext)]
    return name


def load_mtxfile(filepath):
    """
    Load symmetric matrix from a Matrix Market file.

    Parameters
    ----------
    filepath : str
        Filepath and name of the ``*.mtx`` file (may be gzip/bzip2
        compressed).

    Returns
    -------
    A : :class:`cbspart.sparse_utils.SparseSymMatrix`
        Matrix with both triangles stored and 0-based indices.

    Raises
    ------
    ValueError
        If the header does not describe a square, real, symmetric matrix in
        coordinate format.
    cbspart.sparse_utils.NotSPDError
        If a diagonal entry is missing or nonpositive.

    Notes
    -----
    The 1-based indices of the file are converted by :func:`scipy.io.mmread`.

    """

    rows, cols, entries, fmt, field, symmetry = scipy.io.mminfo(filepath)

    if fmt != 'coordinate':
        raise ValueError(f'Matrix Market file must be in coordinate format, '
                         f'got "{fmt}".')
    if rows != cols:
        raise ValueError(f'Matrix must be square, got {rows} x {cols}.')
    if field not in ('real', 'integer'):
        raise ValueError(f'Matrix must be real, got field "{field}".')
    if symmetry != 'symmetric':
        raise ValueError(f'Matrix must be declared symmetric, got '
                         f'"{symmetry}".')

    return SparseSymMatrix(scipy.io.mmread(filepath))


def save_mtxfile(A, filepath, comment=None):
    """
    Save symmetric matrix as Matrix Market file.

    Parameters
    ----------
    A : :class:`cbspart.sparse_utils.SparseSymMatrix`
        Matrix to be saved (only the lower triangle is written).
    filepath : str
        Filepath and name of the output file.
    comment : str, optional
        Comment written below the Matrix Market banner.

    """
    comment = '' if comment is None else str(comment)

    lower = scipy.sparse.tril(A.csr).tocoo()
    scipy.io.mmwrite(filepath, lower, comment=comment,
                     field='real', symmetry='symmetric')

    print(f'Saved Matrix Market file to {filepath}.')


def format_header(config, prefix='# '):
    """
    Render a configuration dictionary as header lines.

    Parameters
    ----------
    config : dict
        Resolved configuration (keys are sorted).
    prefix : str, optional
        Line prefix (defaults to ``'# '``).

    Returns
    -------
    header : str
        One ``key: value`` line per entry, each ending with a newline.

    """
    if not config:
        return ''

    lines = []
    for key in sorted(config):
        value = config[key]
        if isinstance(value, (list, tuple, np.ndarray)):
            value = ' '.join(str(v) for v in np.ravel(value))
        lines.append(f'{prefix}{key}: {value}\n')

    return ''.join(lines)


def save_partition_file(subdomains, filepath, config=None):
    """
    Save a partition as text file.

    Parameters
    ----------
    subdomains : list of array_like
        Vertex sets of the subdomains.
    filepath : str
        Filepath and name of the output file.
    config : dict, optional
        Configuration echoed in the header.

    Notes
    -----
    After the header, the file has one line per subdomain holding the
    space-separated 0-based vertex indices.

    """
    with open(filepath, 'w') as f:
        f.write(format_header(config))
        for V in subdomains:
            f.write(' '.join(str(int(v)) for v in V) + '\n')

    print(f'Saved partition file to {filepath}.')


def load_partition_file(filepath):
    """
    Load a partition from a text file.

    Parameters
    ----------
    filepath : str
        Filepath and name of the partition file.

    Returns
    -------
    subdomains : list of ndarray
        Sorted vertex sets, in the order of the file.

    """
    subdomains = []
    with open(filepath, 'r') as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            V = np.array([int(v) for v in line.split()], dtype=np.intp)
            subdomains.append(as_vertex_set(V))

    return subdomains


def save_steplog_file(steps, filepath, config=None, summary=None):
    """
    Save the step log of a recursive partitioning run as JSON file.

    Parameters
    ----------
    steps : list of dict
        Step records (see :class:`cbspart.partition.PartitionResult`).
    filepath : str
        Filepath and name of the output file.
    config : dict, optional
        Resolved configuration stored under ``'config'``.
    summary : dict, optional
        Additional summary stored under ``'summary'``.

    """
    content = {
        'config': {} if config is None else dict(config),
        'summary': {} if summary is None else dict(summary),
        'steps': list(steps),
    }

    with open(filepath, 'w') as f:
        json.dump(content, f, default=json_default, indent=2,
                  sort_keys=True)

    print(f'Saved step log to {filepath}.')


def load_steplog_file(filepath):
    """
    Load a JSON step log, returning a dictionary with the keys
    ``'config'``, ``'summary'`` and ``'steps'``.

    """
    with open(filepath, 'r') as f:
        return json.load(f)


def save_table(df, filepath, config=None, float_format='%.10g'):
    """
    Save a data frame as CSV file with the configuration as comment header.

    Parameters
    ----------
    df : dataframe
        Pandas data frame (the index is not written).
    filepath : str
        Filepath and name of the output file.
    config : dict, optional
        Configuration echoed in the header.
    float_format : str, optional
        Format of floating point numbers (defaults to ``'%.10g'``).

    """
    with open(filepath, 'w', newline='') as f:
        f.write(format_header(config))
        df.to_csv(f, index=False, float_format=float_format)

    print(f'Saved table to {filepath}.')


def load_table(filepath):
    """
    Load a CSV table written by :func:`save_table` into a pandas data frame
    (header lines are skipped).

    """
    return pd.read_csv(filepath, comment='#')


def reference_iterations(name, method, overlap):
    """
    Published iteration count for a reference matrix.

    Parameters
    ----------
    name : str
        Matrix name, e.g. ``'bcsstk14'`` (case-insensitive).
    method : {'cbs', 'mincut', 'mcut', 'rsb'}
        Partitioning method.
    overlap : int
        Number of overlap layers.

    Returns
    -------
    iterations : int or None
        Reference count or ``None`` if the combination is not tabulated.

    """
    row = REFERENCE_ITERATIONS.get((str(name).lower(), int(overlap)))
    if row is None:
        return None
    return row.get(str(method).lower())
