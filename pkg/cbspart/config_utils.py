# Copyright (C) 2025 The cbspart developers
#
# This file is part of cbspart.
#
# cbspart is released under the MIT license. See LICENSE in the root of the
# repository for full licensing details.

"""
`cbspart.config_utils` contains functions and classes to manipulate the
configuration dictionary, which contains parameters and options in cbspart.
The following list gives an overview of the possible keywords. The keywords can
be accessed after importing cbspart through:

>>> import cbspart as cb
>>> cb.basicConfig['params.load_balance']  # get the default load balance
    0.8

**Partitioning**

 ========================  =========  =========================================
 Value                     Type       Description
 ========================  =========  =========================================
 'params.load_balance'     `float`    Smallest admissible ratio of the smaller
                                      to the larger side of a split, in
                                      (0, 1] (defaults to 0.8).
 'params.max_size'         `int`      Largest admissible subdomain size
                                      (defaults to 50).
 'params.candidates'       `int`      Number of candidate splits examined by
                                      the sweep (defaults to 32).
 'params.split_rule'       `str`      Rule turning an eigenvector into a
                                      split: ``'sweep'``, ``'sign'`` or
                                      ``'median'``.
 'params.seed'             `int`      Seed of every random vector.
 'params.uniform_rtol'     `float`    Relative spread of the edge weights
                                      below which the weights count as uniform.
 'params.symmetry_rtol'    `float`    Relative asymmetry that is symmetrized
                                      silently when a matrix is built.
 'params.mcut_diagonal'    `bool`     Include the diagonal in the within-set
                                      sums w(I), w(J) of the Mcut objective.
 ========================  =========  =========================================

**Eigensolver**

 ========================  =========  =========================================
 Value                     Type       Description
 ========================  =========  =========================================
 'eigen.tol'               `float`    LOBPCG residual tolerance.
 'eigen.maxiter'           `int`      LOBPCG iteration cap.
 'eigen.droptol'           `float`    Drop tolerance of the incomplete
                                      Cholesky preconditioner.
 'eigen.sigma'             `float`    Diagonal shift of the incomplete
                                      Cholesky preconditioner.
 'eigen.ic_retries'        `int`      Number of shift increases (by a factor
                                      of 10) on incomplete Cholesky breakdown.
 'eigen.dense_limit'       `int`      Eigenproblems up to this size are solved
                                      by a dense generalized eigensolve.
 ========================  =========  =========================================

**Solver**

 ========================  =========  =========================================
 Value                     Type       Description
 ========================  =========  =========================================
 'solver.tol'              `float`    PCG relative residual tolerance.
 'solver.maxiter'          `int`      PCG iteration cap.
 'solver.overlap'          `int`      Number of overlap layers added to every
                                      subdomain.
 'solver.dense_limit'      `int`      Subdomains up to this size are factored
                                      with dense Cholesky.
 'oracle.dense_limit'      `int`      Largest matrix accepted by the dense
                                      CBS-constant and condition number
                                      oracles.
 ========================  =========  =========================================

.. autosummary::
    :toctree: classes
    :template: myclass.rst

    BasicConfig

"""

import json
import numpy as np
import warnings
from contextlib import contextmanager


# copied/inspired by matplotlib.rcsetup
def check_float(s):
    """Convert to float."""
    try:
        return float(s)
    except (TypeError, ValueError):
        raise ValueError(f'Could not convert {s} to float.')


def check_int(s):
    """Convert to integer."""
    try:
        return int(s)
    except (TypeError, ValueError):
        raise ValueError(f'Could not convert {s} to integer.')


def check_bool(s):
    """Convert to boolean, accepting the usual string spellings."""
    if isinstance(s, str):
        if s.lower() in ('true', 'yes', 'on', '1'):
            return True
        if s.lower() in ('false', 'no', 'off', '0'):
            return False
        raise ValueError(f'Could not convert {s} to boolean.')
    return bool(s)


def check_positive(s, strict=True):
    """Convert to float and check the sign."""
    s = check_float(s)
    if (strict and s <= 0.) or (s < 0.):
        raise ValueError(f'Value {s} must be '
                         f'{"positive" if strict else "nonnegative"}.')
    return s


def check_positive_int(s, strict=True):
    """Convert to integer and check the sign."""
    s = check_int(s)
    if (strict and s <= 0) or (s < 0):
        raise ValueError(f'Value {s} must be '
                         f'{"positive" if strict else "nonnegative"}.')
    return s


def check_fraction(s):
    """Check that value lies in the half-open interval (0, 1]."""
    s = check_float(s)
    if not 0. < s <= 1.:
        raise ValueError(f'Value {s} must lie in (0, 1].')
    return s


def check_choice(s, choices):
    """Check that value is one of the given strings."""
    s = str(s)
    if s not in choices:
        raise ValueError(f'Unknown option "{s}". Use one of {choices}.')
    return s


DEFAULTS = {
    # partitioning
    'params.load_balance': [0.8, check_fraction],
    'params.max_size': [50, check_positive_int],
    'params.candidates': [32, check_positive_int],
    'params.split_rule': ['sweep',
                          lambda x: check_choice(
                              x, ('sweep', 'sign', 'median'))],
    'params.seed': [42, lambda x: check_positive_int(x, strict=False)],
    'params.uniform_rtol': [1e-8, lambda x: check_positive(x, strict=False)],
    'params.symmetry_rtol': [1e-12,
                             lambda x: check_positive(x, strict=False)],
    'params.mcut_diagonal': [True, check_bool],

    # eigensolver and its preconditioner
    'eigen.tol': [1e-4, check_positive],
    'eigen.maxiter': [500, check_positive_int],
    'eigen.droptol': [1e-3, lambda x: check_positive(x, strict=False)],
    'eigen.sigma': [0.1, lambda x: check_positive(x, strict=False)],
    'eigen.ic_retries': [3, lambda x: check_positive_int(x, strict=False)],
    'eigen.dense_limit': [32, lambda x: check_positive_int(x, strict=False)],

    # preconditioned conjugate gradients
    'solver.tol': [1e-8, check_positive],
    'solver.maxiter': [5000, check_positive_int],
    'solver.overlap': [0, lambda x: check_positive_int(x, strict=False)],
    'solver.dense_limit': [64, lambda x: check_positive_int(x, strict=False)],

    # dense test oracles
    'oracle.dense_limit': [2000, check_positive_int],
}


class BasicConfig(dict):
    """Class for creating the cbspart configuration dictionary."""

    defaults = DEFAULTS

    def __init__(self, *args, **kwargs):
        super().update(*args, **kwargs)

    def __setitem__(self, key, value):
        """Set and check value before updating dictionary."""

        try:
            try:
                cval = self.defaults[key][1](value)
            except ValueError as err:
                raise ValueError(f'Key "{key}": {err}')
            super().__setitem__(key, cval)
        except KeyError:
            raise KeyError(f'"{key}" is not a valid parameter.')

    def __str__(self):
        return '\n'.join(map('{0[0]}: {0[1]}'.format, sorted(self.items())))

    def reset(self, key):
        """
        Load default values.

        Parameters
        ----------
        key : str
            Single keyword that is reset to the default.

        """
        self.__setitem__(key, self.defaults[key][0])

    def fullreset(self):
        """
        Load all default values.

        """
        super().update({key: val for key, (val, _) in self.defaults.items()})

    def load(self, filepath):
        """
        Load configuration dictionary from file.

        Parameters
        ----------
        filepath : str
            Filepath and name to json-formatted configuration txt-file.

        """

        with open(filepath, 'r') as f:
            kwargs = json.load(f)

        if len(kwargs) == 0:
            warnings.warn(
                'Configuration dictionary loaded from file is empty.')

        for key, value in kwargs.items():
            # check format and set key value pairs
            self.__setitem__(key, value)

    def save(self, filepath):
        """
        Save configuration dictionary to a file.

        Parameters
        ----------
        filepath : str
            Filepath and name of the textfile that will be saved with the
            configuration values.

        """

        with open(filepath, 'w') as f:
            json.dump(self, f, default=json_default, indent=4,
                      sort_keys=True)

        print(f'Saved configuration textfile to {filepath}.')

    @contextmanager
    def context(self, key, value):
        """
        Use context manager to temporarily change setting.

        Parameters
        ----------
        key : str
            BasicConfig configuration key.
        value
            Value compatible with ``key``.

        Examples
        --------
        Temporarily loosen the eigensolver tolerance for a computation and
        then change it back to the original value.

        .. code-block:: python

          from cbspart import basicConfig

          print('Before: ', basicConfig['eigen.tol'])

          with basicConfig.context('eigen.tol', 1e-2):
              # partition something quickly ...
              print('Inside: ', basicConfig['eigen.tol'])

          print('After: ', basicConfig['eigen.tol'])

        """
        old_value = self.__getitem__(key)
        self.__setitem__(key, value)
        try:
            yield
        finally:
            self.__setitem__(key, old_value)


def json_default(obj):
    """Serialize numpy scalars and arrays for :func:`json.dump`."""

    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    raise TypeError(f'Object of type {type(obj).__name__} is not '
                    'JSON serializable.')


# load defaults
basicConfig = BasicConfig({key: val for key, (val, _) in DEFAULTS.items()})


if __name__ == '__main__':
    # ensure default passes tests
    for key, (value, test) in DEFAULTS.items():
        if not np.all(test(value) == value):
            print(f"{key}: {test(value)} != {value}")
