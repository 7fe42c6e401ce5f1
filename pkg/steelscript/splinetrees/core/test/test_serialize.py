# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.


from steelscript.splinetrees.core.serialize import (save_ensemble,
                                                    load_ensemble,
                                                    ensemble_to_dict,
                                                    ensemble_from_dict)
from steelscript.splinetrees.core.ensemble import (variant_config, fit_rst,
                                                   fit_rf_baseline,
                                                   RstEnsemble, RandomForest)
from steelscript.splinetrees.core.dataset import synth_dataset
from steelscript.splinetrees.core._exceptions import SerializationException

import os
import json
import shutil
import logging
import tempfile
import unittest

import numpy
import pytest


logger = logging.getLogger(__name__)
logging.basicConfig(level=logging.DEBUG,
                    format="%(asctime)s [%(levelname)-5.5s] %(message)s")


class SerializeTests(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.train, cls.test = synth_dataset(20, 40, 0.3, seed=1)

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def test_rst_round_trip(self):
        ensemble = fit_rst(self.train, variant_config('RST-RB',
                                                      n_estimators=15,
                                                      master_seed=5))
        path = os.path.join(self.tmpdir, 'rst.json')
        save_ensemble(ensemble, path)
        loaded = load_ensemble(path)

        self.assertIsInstance(loaded, RstEnsemble)
        self.assertEqual(loaded.config, ensemble.config)
        self.assertEqual(len(loaded), 15)
        for a, b in zip(ensemble.members, loaded.members):
            self.assertEqual(a.seed, b.seed)
            self.assertEqual(a.theta, b.theta)
            self.assertEqual(a.basis, b.basis)
            self.assertEqual(a.tree, b.tree)
        numpy.testing.assert_array_equal(
            ensemble.member_predictions(self.test.series),
            loaded.member_predictions(self.test.series))

    def test_rf_round_trip(self):
        forest = fit_rf_baseline(self.train, n_estimators=10, seed=2)
        loaded = ensemble_from_dict(json.loads(json.dumps(
            ensemble_to_dict(forest))))
        self.assertIsInstance(loaded, RandomForest)
        self.assertEqual(loaded.config.mtry(40), 7)
        numpy.testing.assert_array_equal(forest.predict(self.test.series),
                                         loaded.predict(self.test.series))

    def test_unknown_version(self):
        ensemble = fit_rst(self.train, variant_config('RST-B',
                                                      n_estimators=2))
        d = ensemble_to_dict(ensemble)
        d['version'] = 99
        with self.assertRaises(SerializationException):
            ensemble_from_dict(d)

        d['version'] = 1
        d['format'] = 'something-else'
        with self.assertRaises(SerializationException):
            ensemble_from_dict(d)

    def test_corrupt(self):
        ensemble = fit_rst(self.train, variant_config('RST-B',
                                                      n_estimators=2))
        d = ensemble_to_dict(ensemble)
        del d['members'][0]['tree']
        with self.assertRaises(SerializationException):
            ensemble_from_dict(d)

        d = ensemble_to_dict(ensemble)
        d['kind'] = 'boosted'
        with self.assertRaises(SerializationException):
            ensemble_from_dict(d)

        path = os.path.join(self.tmpdir, 'bad.json')
        with open(path, 'w') as f:
            f.write('{not json')
        with self.assertRaises(SerializationException):
            load_ensemble(path)


if __name__ == '__main__':
    pytest.main([__file__])
