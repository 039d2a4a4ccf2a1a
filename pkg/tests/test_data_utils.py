# Copyright (C) 2025 The cbspart developers
#
# This file is part of cbspart.
#
# cbspart is released under the MIT license. See LICENSE in the root of the
# repository for full licensing details.

import os
import tempfile
import textwrap
import numpy as np
import scipy.io
import scipy.sparse as sp
from unittest import TestCase, main
from cbspart import data_utils as du
from cbspart.model_utils import model_problem, fd_diffusion

try:
    from tests.helpers import random_spd
except ImportError:
    from helpers import random_spd


class DataUtils(TestCase):
    def setUp(self):

        print(textwrap.dedent(f"""\

            {"":-^70}
            Running {self._testMethodName}:
            """))

        self.tmpdir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmpdir.cleanup()

    def path(self, name):
        return os.path.join(self.tmpdir.name, name)

    def test_mtxfile(self):

        A = fd_diffusion(model_problem('square-jump-ab', grid=5))
        filepath = self.path('square.mtx')

        du.save_mtxfile(A, filepath, comment='grid 5')
        self.assertEqual(scipy.io.mminfo(filepath)[5], 'symmetric')

        B = du.load_mtxfile(filepath)
        self.assertEqual(B.n, 25)
        np.testing.assert_allclose(B.toarray(), A.toarray(), rtol=1e-14)

    def test_mtxfile_rejected(self):

        general = self.path('general.mtx')
        scipy.io.mmwrite(general, sp.coo_matrix(np.array([[1., 2.],
                                                          [0., 1.]])))
        with self.assertRaises(ValueError):
            du.load_mtxfile(general)

        dense = self.path('dense.mtx')
        scipy.io.mmwrite(dense, np.eye(2))
        with self.assertRaises(ValueError):
            du.load_mtxfile(dense)

        with self.assertRaises(OSError):
            du.load_mtxfile(self.path('missing.mtx'))

    def test_matrix_name(self):

        self.assertEqual(du.matrix_name('data/bcsstk14.mtx'), 'bcsstk14')
        self.assertEqual(du.matrix_name('/tmp/ex33.mtx.gz'), 'ex33')
        self.assertEqual(du.matrix_name('plain'), 'plain')

    def test_partition_file(self):

        subdomains = [np.array([0, 2, 5]), np.array([1, 3]), np.array([4])]
        filepath = self.path('test.partition')

        du.save_partition_file(subdomains, filepath,
                               config={'method': 'cbs', 'max_size': 3})

        with open(filepath) as f:
            lines = f.read().splitlines()

        self.assertEqual(lines[:2], ['# max_size: 3', '# method: cbs'])
        self.assertEqual(lines[2:], ['0 2 5', '1 3', '4'])

        loaded = du.load_partition_file(filepath)
        self.assertEqual([V.tolist() for V in loaded],
                         [V.tolist() for V in subdomains])

    def test_steplog_file(self):

        steps = [{'size': 10, 'sizes': [5, 5], 'gamma_tilde': np.float64(.2),
                  'fallback': False}]
        filepath = self.path('test.steps.json')

        du.save_steplog_file(steps, filepath, config={'seed': 42},
                             summary={'n_subdomains': np.int64(2)})
        log = du.load_steplog_file(filepath)

        self.assertEqual(log['config'], {'seed': 42})
        self.assertEqual(log['summary'], {'n_subdomains': 2})
        self.assertEqual(log['steps'][0]['sizes'], [5, 5])
        self.assertEqual(log['steps'][0]['gamma_tilde'], 0.2)

    def test_table(self):

        import pandas as pd

        df = pd.DataFrame({'matrix': ['a', 'b'], 'iterations': [10.5, 20.],
                           'converged': [True, False]})
        filepath = self.path('test.bench.csv')

        du.save_table(df, filepath, config={'seeds': [1, 2]})

        with open(filepath) as f:
            self.assertEqual(f.readline(), '# seeds: 1 2\n')

        loaded = du.load_table(filepath)
        self.assertEqual(list(loaded.columns), list(df.columns))
        np.testing.assert_allclose(loaded['iterations'], [10.5, 20.])
        self.assertEqual(loaded['converged'].tolist(), [True, False])

    def test_format_header(self):

        self.assertEqual(du.format_header(None), '')
        self.assertEqual(du.format_header({'b': 1, 'a': [0, 2]}),
                         '# a: 0 2\n# b: 1\n')

    def test_reference_iterations(self):

        self.assertEqual(du.reference_iterations('BCSSTK14', 'cbs', 0), 147)
        self.assertEqual(du.reference_iterations('bcsstk13', 'rsb', 0), 889)
        self.assertEqual(du.reference_iterations('ex33', 'cbs', 2), 44)
        self.assertEqual(du.reference_iterations('ex33', 'rsb', 2), 104)
        self.assertIsNone(du.reference_iterations('ex33', 'cbs', 0))
        self.assertIsNone(du.reference_iterations('bcsstk14', 'other', 0))

        for (name, overlap) in du.REFERENCE_ITERATIONS:
            self.assertIn(name, du.REFERENCE_SIZES)

    def test_load_matrix_not_spd(self):

        A = random_spd(5, seed=4)
        dense = A.toarray()
        dense[2, 2] = -1.
        filepath = self.path('indefinite.mtx')
        scipy.io.mmwrite(filepath, sp.coo_matrix(dense), symmetry='symmetric')

        from cbspart.sparse_utils import NotSPDError
        with self.assertRaises(NotSPDError):
            du.load_mtxfile(filepath)


if __name__ == '__main__':
    main()
