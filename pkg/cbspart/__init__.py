# Copyright (C) 2025 The cbspart developers
#
# This file is part of cbspart.
#
# cbspart is released under the MIT license. See LICENSE in the root of the
# repository for full licensing details.

"""
cbspart is a Python package for partitioning the adjacency graph of a sparse
symmetric positive definite matrix with spectral methods that take the
matrix coefficients into account, and for measuring the effect of the
partition on additive Schwarz preconditioning.

>>> import cbspart as cb
>>> A = cb.fd_diffusion(cb.model_problem('square-jump-ab'))
>>> result = cb.recursive_partition(A, cb.PartitionConfig(max_size=190))

The following modules are available:

* cbspart.partition (recursive spectral partitioner)
* cbspart.sparse_utils (symmetric sparse matrix and graph containers)
* cbspart.laplacian_utils (edge weights, graph Laplacians and cuts)
* cbspart.cbs_utils (CBS constant, its estimates and condition bounds)
* cbspart.eigen_utils (Laplacian eigenproblems with LOBPCG)
* cbspart.solver_utils (additive Schwarz preconditioner and PCG)
* cbspart.model_utils (diffusion model problems)
* cbspart.data_utils (tools for reading/writing matrices and results)
* cbspart.config_utils (tools for customizing cbspart parameters)
* cbspart.cli (command line interface)

"""

__all__ = [
    "PartitionConfig", "PartitionResult", "recursive_partition",
    "bipartition_step", "split_from_vector", "SparseSymMatrix", "Graph",
    "NotSPDError", "DegenerateSplitError", "EigensolverError",
    "ICBreakdownError", "cbs_weights", "build_laplacians", "cbs_exact",
    "cbs_report", "AsPreconditioner", "pcg", "solve_partitioned",
    "DiffusionSpec", "model_problem", "fd_diffusion", "grid_plot_data",
    "load_mtxfile", "save_mtxfile", "basicConfig"
]

__version__ = "0.1"

from .partition import (
    PartitionConfig,
    PartitionResult,
    recursive_partition,
    bipartition_step,
    split_from_vector
)

from .config_utils import basicConfig
from .sparse_utils import (SparseSymMatrix, Graph, NotSPDError,
                           DegenerateSplitError)
from .eigen_utils import EigensolverError, ICBreakdownError
from .laplacian_utils import cbs_weights, build_laplacians
from .cbs_utils import cbs_exact, cbs_report
from .solver_utils import AsPreconditioner, pcg, solve_partitioned
from .model_utils import (DiffusionSpec, model_problem, fd_diffusion,
                          grid_plot_data)
from .data_utils import load_mtxfile, save_mtxfile
