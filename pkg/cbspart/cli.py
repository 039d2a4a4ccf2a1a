# Copyright (C) 2025 The cbspart developers
#
# This file is part of cbspart.
#
# cbspart is released under the MIT license. See LICENSE in the root of the
# repository for full licensing details.

"""
`cbspart.cli` is the command line front end. It provides four commands:

 ============  ================================================================
 Command       Description
 ============  ================================================================
 gen           Write a diffusion model problem to a Matrix Market file.
 partition     Partition a matrix, write ``PREFIX.partition``,
               ``PREFIX.steps.json`` and, for model problems,
               ``PREFIX.grid.csv``.
 solve         Partition a matrix and solve a random system with PCG and the
               additive Schwarz preconditioner (``PREFIX.bench.csv``).
 bench         Iteration counts of several methods, overlaps and matrices,
               averaged over seeds (``PREFIX.bench.csv``).
 ============  ================================================================

Exit codes: 0 on success, 2 for unreadable input or invalid arguments, 3 for
a matrix that is not symmetric positive definite and 4 if the eigensolver
fails (the step log gathered so far is still written). The environment
variable ``CBSPART_SEED`` replaces the default seed.

.. code-block:: bash

  cbspart partition --model square-jump-ab --method cbs --max-size 190
  cbspart bench --matrix data/bcsstk14.mtx --overlaps 0 2 --identity

.. autosummary::
    :toctree: classes
    :template: myclass.rst

    RunConfig

.. autosummary::
    :toctree: functions

    main
    cmd_gen
    cmd_partition
    cmd_solve
    cmd_bench

"""

import argparse
import os
import sys
import numpy as np
import pandas as pd
from . import __version__
from .config_utils import basicConfig, check_int
from .sparse_utils import NotSPDError, check_spd
from .data_utils import (load_mtxfile, save_mtxfile, matrix_name,
                         save_partition_file, save_steplog_file, save_table,
                         format_header, reference_iterations)
from .eigen_utils import EigensolverError, ICBreakdownError
from .partition import METHODS, RULES, PartitionConfig, recursive_partition
from .solver_utils import SolveReport, solve_partitioned
from .model_utils import (MODEL_PROBLEMS, FACE_MEANS, SAMPLINGS,
                          model_problem, fd_diffusion, grid_plot_data)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_SPD = 3
EXIT_EIGEN = 4

BENCH_COLUMNS = SolveReport.columns + ['reference', 'deviation', 'status']


class RunConfig(object):
    """
    Resolved settings of one command line run.

    Parameters not given fall back to :data:`cbspart.basicConfig`, so that
    the defaults are loadBalance 0.8, overlap 0, PCG tolerance 1e-8,
    eigensolver tolerance 1e-4, drop tolerance 1e-3 and shift 0.1.

    Parameters
    ----------
    command : {'gen', 'partition', 'solve', 'bench'}
        Command to run.
    matrices : list of str, optional
        Matrix Market files.
    models : list of str, optional
        Names of model problems (see
        :func:`cbspart.model_utils.model_problem`).
    methods : list of str, optional
        Partitioning methods (defaults to ``['cbs']``).
    max_size : int, optional
        Largest subdomain size. Defaults to ``n // 20`` for matrix files and
        to the recommended value of a model problem.
    overlaps : list of int, optional
        Overlap layers (defaults to ``[basicConfig['solver.overlap']]``).
    seeds : list of int, optional
        Seeds of the random right-hand sides and initial guesses. The first
        one also seeds the eigensolver. Defaults to the value of
        ``CBSPART_SEED`` or ``basicConfig['params.seed']``, for the bench
        command to four consecutive seeds starting there.
    output : str, optional
        Prefix of the output files.
    identity : bool, optional
        Add an unpreconditioned baseline row to the benchmark.
    deterministic : bool, optional
        Report zero seconds so that repeated runs write identical files.
    grid, face, sampling : optional
        Model problem settings (see
        :class:`cbspart.model_utils.DiffusionSpec`).
    load_balance, candidates, split_rule, eig_tol, eig_maxiter, droptol, \
sigma, strict : optional
        Partitioner settings (see :class:`cbspart.partition.PartitionConfig`).
    tol, maxit : optional
        PCG settings (see :func:`cbspart.solver_utils.pcg`).

    """

    def __init__(self, command, *, matrices=None, models=None, methods=None,
                 max_size=None, overlaps=None, seeds=None, output=None,
                 identity=False, deterministic=False, grid=None, face=None,
                 sampling=None, load_balance=None, candidates=None,
                 split_rule=None, tol=None, maxit=None, eig_tol=None,
                 eig_maxiter=None, droptol=None, sigma=None, strict=False):

        self.command = command
        self.matrices = list(matrices or [])
        self.models = list(models or [])
        self.methods = list(methods or ['cbs'])
        self.max_size = max_size
        self.overlaps = [int(k) for k in (overlaps or
                                          [basicConfig['solver.overlap']])]
        self.seeds = (default_seeds(command) if not seeds
                      else [int(seed) for seed in seeds])
        self.output = output
        self.identity = bool(identity)
        self.deterministic = bool(deterministic)

        self.grid = 20 if grid is None else int(grid)
        self.face = face
        self.sampling = sampling

        def resolve(value, key):
            return basicConfig[key] if value is None else value

        self.load_balance = resolve(load_balance, 'params.load_balance')
        self.candidates = resolve(candidates, 'params.candidates')
        self.split_rule = resolve(split_rule, 'params.split_rule')
        self.eig_tol = resolve(eig_tol, 'eigen.tol')
        self.eig_maxiter = resolve(eig_maxiter, 'eigen.maxiter')
        self.droptol = resolve(droptol, 'eigen.droptol')
        self.sigma = resolve(sigma, 'eigen.sigma')
        self.strict = bool(strict)

        self.tol = basicConfig['solver.tol'] if tol is None else float(tol)
        self.maxit = (basicConfig['solver.maxiter'] if maxit is None
                      else int(maxit))

        if any(k < 0 for k in self.overlaps):
            raise ValueError('Overlap must be nonnegative.')

    @classmethod
    def from_args(cls, args):
        """Build the run configuration from parsed arguments."""

        def get(name):
            return getattr(args, name, None)

        matrices = get('matrix')
        models = get('model')
        methods = get('methods') or ([get('method')] if get('method')
                                     else None)
        overlaps = get('overlaps') or ([get('overlap')]
                                       if get('overlap') is not None
                                       else None)
        seeds = get('seeds') or ([get('seed')] if get('seed') is not None
                                 else None)

        return cls(
            args.command,
            matrices=[matrices] if isinstance(matrices, str) else matrices,
            models=[models] if isinstance(models, str) else models,
            methods=methods, max_size=get('max_size'), overlaps=overlaps,
            seeds=seeds, output=get('output'),
            identity=get('identity'), deterministic=get('deterministic'),
            grid=get('grid'), face=get('face'), sampling=get('sampling'),
            load_balance=get('load_balance'), candidates=get('candidates'),
            split_rule=get('split_rule'), tol=get('tol'),
            maxit=get('maxit'), eig_tol=get('eig_tol'),
            eig_maxiter=get('eig_maxiter'), droptol=get('droptol'),
            sigma=get('sigma'), strict=get('strict'))

    def partition_config(self, method, max_size):
        return PartitionConfig(
            method, max_size=max_size, load_balance=self.load_balance,
            candidates=self.candidates, split_rule=self.split_rule,
            seed=self.seeds[0], eig_tol=self.eig_tol,
            eig_maxiter=self.eig_maxiter, sigma=self.sigma,
            droptol=self.droptol, strict=self.strict)

    def model_kwargs(self):
        kwargs = {'face': self.face, 'sampling': self.sampling}
        return {key: val for key, val in kwargs.items() if val is not None}

    def to_dict(self):
        """Resolved configuration echoed in every output file."""
        return {
            'cbspart': __version__,
            'command': self.command,
            'matrices': self.matrices,
            'models': self.models,
            'grid': self.grid,
            'face': self.face or 'arithmetic',
            'sampling': self.sampling or 'node',
            'methods': self.methods,
            'max_size': 'auto' if self.max_size is None else self.max_size,
            'overlaps': self.overlaps,
            'seeds': self.seeds,
            'tol': self.tol,
            'maxit': self.maxit,
            'identity': self.identity,
            'deterministic': self.deterministic,
            'load_balance': self.load_balance,
            'candidates': self.candidates,
            'split_rule': self.split_rule,
            'eig_tol': self.eig_tol,
            'eig_maxiter': self.eig_maxiter,
            'droptol': self.droptol,
            'sigma': self.sigma,
            'strict': self.strict,
        }

    def header(self, **extra):
        config = self.to_dict()
        config.update(extra)
        return config

    def prefix(self, default):
        return default if self.output is None else self.output


def default_seeds(command):
    """
    Seeds used when none are given: ``CBSPART_SEED`` if set, otherwise
    ``basicConfig['params.seed']``. The bench command uses four consecutive
    seeds.

    """
    env = os.environ.get('CBSPART_SEED')
    seed = basicConfig['params.seed'] if env is None else check_int(env)
    count = 4 if command == 'bench' else 1
    return [seed + k for k in range(count)]


def load_source(run, kind, source):
    """
    Matrix of a file or model problem.

    Returns
    -------
    name : str
        Matrix name.
    A : :class:`cbspart.sparse_utils.SparseSymMatrix`
        Matrix.
    spec : :class:`cbspart.model_utils.DiffusionSpec` or None
        Model description (``None`` for matrix files).
    max_size : int
        Largest subdomain size of this run.

    """
    if kind == 'matrix':
        A = load_mtxfile(source)
        check_spd(A)
        default = max(A.n // 20, 1)
        name, spec = matrix_name(source), None
    else:
        spec = model_problem(source, run.grid, **run.model_kwargs())
        A = fd_diffusion(spec)
        default = spec.max_size
        name = spec.name

    max_size = default if run.max_size is None else int(run.max_size)
    return name, A, spec, max_size


def _single_source(run):
    if len(run.matrices) + len(run.models) != 1:
        raise ValueError('Give exactly one matrix file or model problem.')
    if run.matrices:
        return 'matrix', run.matrices[0]
    return 'model', run.models[0]


def _partition(run, name, A, spec, max_size, method, prefix):
    header = run.header(matrix=name, n=A.n, method=method,
                        max_size=max_size)
    config = run.partition_config(method, max_size)

    try:
        result = recursive_partition(A, config)
    except EigensolverError as err:
        save_steplog_file(err.steps, f'{prefix}.steps.json', header,
                          summary={'error': str(err)})
        raise

    print(result)

    save_partition_file(result.subdomains, f'{prefix}.partition', header)
    save_steplog_file(result.steps, f'{prefix}.steps.json', header,
                      summary=result.summary())

    if spec is not None:
        save_table(grid_plot_data(result, spec), f'{prefix}.grid.csv',
                   header)

    return result


def cmd_gen(run):
    """Write a model problem to ``PREFIX.mtx``."""

    if len(run.models) != 1:
        raise ValueError('Give exactly one model problem.')

    spec = model_problem(run.models[0], run.grid, **run.model_kwargs())
    A = fd_diffusion(spec)

    comment = format_header(run.header(model=spec.name, n=A.n), prefix=' ')
    save_mtxfile(A, f'{run.prefix(spec.name)}.mtx',
                 comment=comment.rstrip('\n'))

    return EXIT_OK


def cmd_partition(run):
    """Partition one matrix and write the partition and step log."""

    kind, source = _single_source(run)
    name, A, spec, max_size = load_source(run, kind, source)

    _partition(run, name, A, spec, max_size, run.methods[0],
               run.prefix(name))

    return EXIT_OK


def _bench_row(name, method, overlap, reports, n, s):
    # mean over the seeds
    row = {
        'matrix': name,
        'n': n,
        'method': method,
        's': s,
        'overlap': overlap,
        'iterations': float(np.mean([r.iterations for r in reports])),
        'converged': all(r.converged for r in reports),
        'seconds': float(np.mean([r.seconds for r in reports])),
    }

    reference = (None if method == 'identity'
                 else reference_iterations(name, method, overlap))
    row['reference'] = reference
    row['deviation'] = (None if reference is None
                        else (row['iterations'] - reference) / reference)
    row['status'] = 'ok' if row['converged'] else 'maxit'

    return row


def _solve_seeds(run, A, subdomains, overlap, meta):
    reports = []
    for seed in run.seeds:
        report = solve_partitioned(A, subdomains, overlap=overlap,
                                   tol=run.tol, maxit=run.maxit, seed=seed,
                                   meta=meta)
        if run.deterministic:
            report.seconds = 0.
        reports.append(report)
    return reports


def cmd_solve(run):
    """Partition one matrix and solve with PCG and additive Schwarz."""

    kind, source = _single_source(run)
    name, A, spec, max_size = load_source(run, kind, source)
    method = run.methods[0]
    prefix = run.prefix(name)

    result = _partition(run, name, A, spec, max_size, method, prefix)

    rows = []
    for overlap in run.overlaps:
        meta = {'matrix': name, 'method': method,
                'max_size': max_size, 'overlap': overlap}
        reports = _solve_seeds(run, A, result.subdomains, overlap, meta)
        for report in reports:
            print(report)
        rows.append(_bench_row(name, method, overlap, reports, A.n,
                               result.n_subdomains))

    save_table(pd.DataFrame(rows, columns=BENCH_COLUMNS),
               f'{prefix}.bench.csv', run.header(matrix=name, n=A.n,
                                                 max_size=max_size))

    return EXIT_OK


def _missing_row(name, status):
    row = dict.fromkeys(BENCH_COLUMNS)
    row.update({'matrix': name, 'status': status})
    return row


def cmd_bench(run):
    """Iteration counts over matrices, methods, overlaps and seeds."""

    sources = ([('matrix', path) for path in run.matrices]
               + [('model', name) for name in run.models])
    if not sources:
        raise ValueError('Give at least one matrix file or model problem.')

    rows = []
    for kind, source in sources:
        try:
            name, A, spec, max_size = load_source(run, kind, source)
        except (OSError, ValueError) as err:
            name = matrix_name(source) if kind == 'matrix' else source
            status = ('missing' if isinstance(err, FileNotFoundError)
                      else 'not_spd' if isinstance(err, NotSPDError)
                      else 'unreadable')
            print(f'Skipping {source}: {err}')
            rows.append(_missing_row(name, status))
            continue

        print(f'{name}: n = {A.n}, max_size = {max_size}')

        if run.identity:
            meta = {'matrix': name, 'method': 'identity'}
            reports = _solve_seeds(run, A, None, 0, meta)
            rows.append(_bench_row(name, 'identity', 0, reports, A.n, 0))

        for method in run.methods:
            config = run.partition_config(method, max_size)
            result = recursive_partition(A, config)

            for overlap in run.overlaps:
                meta = {'matrix': name, 'method': method,
                        'max_size': max_size, 'overlap': overlap}
                reports = _solve_seeds(run, A, result.subdomains, overlap,
                                       meta)
                row = _bench_row(name, method, overlap, reports, A.n,
                                 result.n_subdomains)
                print(f'  {method:7s} overlap {overlap}: '
                      f'{row["iterations"]:.1f} iterations')
                rows.append(row)

    save_table(pd.DataFrame(rows, columns=BENCH_COLUMNS),
               f'{run.prefix("bench")}.bench.csv', run.header())

    return EXIT_OK


COMMANDS = {
    'gen': cmd_gen,
    'partition': cmd_partition,
    'solve': cmd_solve,
    'bench': cmd_bench,
}


def build_parser():
    """Argument parser of the ``cbspart`` command."""

    parser = argparse.ArgumentParser(
        prog='cbspart',
        description='Coefficient-based spectral partitioning of sparse '
                    'symmetric positive definite matrices and additive '
                    'Schwarz benchmarks.')
    parser.add_argument('--version', action='version',
                        version=f'%(prog)s {__version__}')

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-o', '--output', metavar='PREFIX',
                        help='prefix of the output files')
    common.add_argument('--config', metavar='FILE',
                        help='JSON file with configuration values')

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument('--grid', type=int,
                       help='interior grid points per side (default 20)')
    model.add_argument('--face', choices=FACE_MEANS,
                       help='face coefficient mean (default arithmetic)')
    model.add_argument('--sampling', choices=SAMPLINGS,
                       help='coefficient sampling (default node)')

    part = argparse.ArgumentParser(add_help=False)
    part.add_argument('--max-size', type=int,
                      help='largest subdomain size (default n // 20 for '
                           'matrix files, preset value for models)')
    part.add_argument('--load-balance', type=float,
                      help='smallest side ratio of a split (default 0.8)')
    part.add_argument('--candidates', type=int,
                      help='candidate splits per sweep (default 32)')
    part.add_argument('--split-rule', choices=RULES,
                      help='eigenvector split rule (default sweep)')
    part.add_argument('--eig-tol', type=float,
                      help='eigensolver tolerance (default 1e-4)')
    part.add_argument('--eig-maxiter', type=int,
                      help='eigensolver iteration cap (default 500)')
    part.add_argument('--droptol', type=float,
                      help='incomplete Cholesky drop tolerance '
                           '(default 1e-3)')
    part.add_argument('--sigma', type=float,
                      help='incomplete Cholesky shift (default 0.1)')
    part.add_argument('--strict', action='store_true',
                      help='fail if an eigensolve does not converge')

    solve = argparse.ArgumentParser(add_help=False)
    solve.add_argument('--tol', type=float,
                       help='PCG relative residual tolerance (default 1e-8)')
    solve.add_argument('--maxit', type=int,
                       help='PCG iteration cap (default 5000)')
    solve.add_argument('--deterministic', action='store_true',
                       help='report zero seconds')

    def source(p):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument('--matrix', metavar='FILE',
                           help='Matrix Market file')
        group.add_argument('--model', choices=sorted(MODEL_PROBLEMS),
                           help='model problem')

    commands = parser.add_subparsers(dest='command', required=True)

    p = commands.add_parser('gen', parents=[common, model],
                            help='write a model problem')
    p.add_argument('--model', choices=sorted(MODEL_PROBLEMS), required=True,
                   help='model problem')

    p = commands.add_parser('partition', parents=[common, model, part],
                            help='partition a matrix')
    source(p)
    p.add_argument('--method', choices=METHODS, default='cbs')
    p.add_argument('--seed', type=int, help='random seed')

    p = commands.add_parser('solve', parents=[common, model, part, solve],
                            help='partition and solve with PCG')
    source(p)
    p.add_argument('--method', choices=METHODS, default='cbs')
    p.add_argument('--overlap', type=int, help='overlap layers (default 0)')
    p.add_argument('--seeds', type=int, nargs='+', help='random seeds')

    p = commands.add_parser('bench', parents=[common, model, part, solve],
                            help='iteration counts of several methods')
    p.add_argument('--matrix', nargs='*', default=[], metavar='FILE',
                   help='Matrix Market files')
    p.add_argument('--model', nargs='*', default=[],
                   choices=sorted(MODEL_PROBLEMS), help='model problems')
    p.add_argument('--methods', nargs='+', choices=METHODS,
                   default=list(METHODS))
    p.add_argument('--overlaps', type=int, nargs='+',
                   help='overlap layers (default 0)')
    p.add_argument('--seeds', type=int, nargs='+',
                   help='random seeds (default four consecutive seeds)')
    p.add_argument('--identity', action='store_true',
                   help='add an unpreconditioned baseline')

    return parser


def main(argv=None):
    """
    Run the command line interface and return the exit code.

    """
    args = build_parser().parse_args(argv)

    try:
        if args.config is not None:
            basicConfig.load(args.config)
        run = RunConfig.from_args(args)
        return COMMANDS[run.command](run)

    except NotSPDError as err:
        print(f'cbspart: matrix is not symmetric positive definite: {err}',
              file=sys.stderr)
        return EXIT_NOT_SPD

    except (EigensolverError, ICBreakdownError) as err:
        print(f'cbspart: eigensolver failed: {err}', file=sys.stderr)
        return EXIT_EIGEN

    except (OSError, ValueError) as err:
        print(f'cbspart: {err}', file=sys.stderr)
        return EXIT_INPUT
