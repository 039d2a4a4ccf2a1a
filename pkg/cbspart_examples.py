# Copyright (C) 2025 The cbspart developers
#
# This file is part of cbspart.
#
# cbspart is released under the MIT license. See LICENSE in the root of the
# repository for full licensing details.

import numpy as np
import pandas as pd
import cbspart as cb
from cbspart.cbs_utils import cond_measured
from cbspart.eigen_utils import EigProblemSpec, lobpcg_smallest
from cbspart.eigen_utils import eigenvector_separation
from cbspart.laplacian_utils import build_laplacians
from cbspart.model_utils import grid_coordinates, jump_region
from cbspart.data_utils import save_table


def main():
    """
    Run examples by uncommenting lines below.
    """

    example1()
    # example2()
    # example3()
    # example4()


def example1():

    # square jump region with a jump of 100 in both coefficients
    spec = cb.model_problem('square-jump-ab')
    A = cb.fd_diffusion(spec)

    config = cb.PartitionConfig('cbs', max_size=spec.max_size)
    result = cb.recursive_partition(A, config)
    print(result)

    for step in result.steps:
        print(f'step on {step["size"]} vertices: sizes {step["sizes"]}, '
              f'{step["n_components"]} components, '
              f'gamma_tilde = {step["gamma_tilde"]:.4f}')

    # per-node table for plotting with any external tool
    save_table(cb.grid_plot_data(result, spec), 'example1_output.csv',
               spec.to_dict())


def example2():

    # PCG iterations of all methods on the checkerboard problem
    spec = cb.model_problem('checker-ab')
    A = cb.fd_diffusion(spec)

    rows = []
    for method in ['cbs', 'rsb', 'mincut', 'mcut']:
        result = cb.recursive_partition(
            A, cb.PartitionConfig(method, max_size=spec.max_size))

        for overlap in [0, 2]:
            report = cb.solve_partitioned(A, result.subdomains,
                                          overlap=overlap)
            rows.append({'method': method, 'overlap': overlap,
                         's': result.n_subdomains,
                         'iterations': report.iterations})

    print(pd.DataFrame(rows).pivot(index='method', columns='overlap',
                                   values='iterations'))


def example3():

    # exact CBS constant of the first split against its estimates
    spec = cb.model_problem('square-jump-ab')
    A = cb.fd_diffusion(spec)

    for method in ['cbs', 'rsb']:
        result = cb.recursive_partition(
            A, cb.PartitionConfig(method, max_size=A.n - 1))

        # the first side holds the component with vertex 0
        I = result.subdomains[0]
        J = np.setdiff1d(np.arange(A.n), I)

        report = cb.cbs_report(A, I, J)
        kappa = cond_measured(A, [I, J])
        print(f'{method}: {report}')
        print(f'    measured condition number {kappa:.4f}')


def example4():

    # separation of the eigenvector components inside and outside of the
    # jump region
    spec = cb.model_problem('square-jump-ab')
    G = cb.cbs_weights(cb.fd_diffusion(spec))
    laplacians = build_laplacians(G)
    inside = jump_region(spec, *grid_coordinates(spec.grid))

    for kind in ['cbs_ratio', 'fiedler']:
        eig = lobpcg_smallest(EigProblemSpec(kind), laplacians.L_w,
                              laplacians.L, laplacians.d_w)
        ratio = eigenvector_separation(eig.eigenvector, inside)
        print(f'{kind}: {eig}, separation {ratio:.3f}')


if __name__ == '__main__':

    main()
