# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.


from steelscript.splinetrees.core.ensemble import (RstConfig, RfConfig,
                                                   variant_config, alt_label,
                                                   tree_seed, sample_theta,
                                                   fit_rst, fit_rf_baseline,
                                                   predict, predict_batch,
                                                   member_predictions, vote,
                                                   accuracy)
from steelscript.splinetrees.core.bspline import coefficients_matrix
from steelscript.splinetrees.core.dataset import Dataset, synth_dataset
from steelscript.splinetrees.core.tree import grow_tree
from steelscript.splinetrees.core._types import TreeParams, SplitStrategy
from steelscript.splinetrees.core._exceptions import (ConfigException,
                                                      InvalidInputException)

import logging
import unittest

import numpy
import pytest


logger = logging.getLogger(__name__)
logging.basicConfig(level=logging.DEBUG,
                    format="%(asctime)s [%(levelname)-5.5s] %(message)s")

VARIANTS = ['RST-B', 'RST-R', 'RST-BB', 'RST-RB']


@pytest.fixture(scope="class")
def synthetic(request):
    """ Separable two-class sine dataset shared by a test class. """
    request.cls.train, request.cls.test = synth_dataset(50, 64, 0.3, seed=0)


def tiny_dataset():
    rng = numpy.random.default_rng(0)
    t = numpy.arange(10) / 9.0
    series = numpy.array([t, t ** 2, 1 - t, numpy.cos(3 * t)])
    series = series + 0.01 * rng.standard_normal(series.shape)
    return Dataset(series, [1, 1, 2, 2], {1: 1, 2: 2}, name='tiny')


class ConfigTests(unittest.TestCase):

    def test_defaults(self):
        config = RstConfig()
        self.assertEqual(config.n_estimators, 100)
        self.assertEqual(config.order_range, (3, 9))
        self.assertEqual(config.nbasis_range, (11, 50))
        self.assertEqual(config.split_strategy, SplitStrategy.BEST)
        self.assertFalse(config.bootstrap)

    def test_range_invariants(self):
        for o, k in [((0, 3), (5, 6)), ((4, 3), (5, 6)), ((3, 9), (8, 50)),
                     ((3, 4), (11, 10))]:
            with self.assertRaises(ConfigException):
                RstConfig(order_range=o, nbasis_range=k)
        with self.assertRaises(ConfigException):
            RstConfig(n_estimators=0)

    def test_variants(self):
        expected = {'RST-B': ('best', False), 'RST-R': ('random', False),
                    'RST-BB': ('best', True), 'RST-RB': ('random', True)}
        configs = []
        for name, (strategy, bootstrap) in expected.items():
            config = variant_config(name, n_estimators=7)
            self.assertEqual(config.split_strategy, strategy)
            self.assertEqual(config.tree_params.split_strategy, strategy)
            self.assertEqual(config.bootstrap, bootstrap)
            self.assertEqual(config.n_estimators, 7)
            configs.append(config)
        for i in range(len(configs)):
            for j in range(i + 1, len(configs)):
                self.assertNotEqual(configs[i], configs[j])
        with self.assertRaises(ConfigException):
            variant_config('RST-X')

    def test_alt_label(self):
        self.assertEqual(alt_label('RST-BB'), 'RST-RB')
        self.assertEqual(alt_label('RST-RB'), 'RST-BB')
        self.assertEqual(alt_label('RST-R'), 'RST-R')
        self.assertEqual(alt_label('RF'), 'RF')

    def test_dict_round_trip(self):
        config = variant_config('RST-RB', master_seed=3,
                                tree_params=TreeParams(max_depth=4))
        self.assertEqual(RstConfig.from_dict(config.to_dict()), config)
        self.assertEqual(config.replace(n_estimators=5).n_estimators, 5)

    def test_rf_mtry(self):
        self.assertEqual(RfConfig().mtry(24), 5)
        self.assertEqual(RfConfig().mtry(64), 8)
        self.assertEqual(RfConfig(max_features=100).mtry(24), 24)


class SampleThetaTests(unittest.TestCase):

    def test_degenerate_ranges(self):
        config = RstConfig(order_range=(3, 3), nbasis_range=(11, 11))
        theta = sample_theta(numpy.random.default_rng(0), config, 64)
        self.assertEqual((theta.order, theta.num_basis), (3, 11))
        self.assertFalse(theta.clamped)

    def test_clamped_to_length(self):
        config = RstConfig()
        rng = numpy.random.default_rng(1)
        clamped = 0
        for _ in range(500):
            theta = sample_theta(rng, config, 24)
            self.assertLessEqual(theta.num_basis, 24)
            self.assertGreaterEqual(theta.num_basis, theta.order)
            self.assertTrue(11 <= theta.drawn_num_basis <= 50)
            self.assertEqual(theta.clamped,
                             theta.num_basis != theta.drawn_num_basis)
            clamped += theta.clamped
        self.assertGreater(clamped, 0)

    def test_order_is_uniform(self):
        config = RstConfig()
        rng = numpy.random.default_rng(2)
        n = 10000
        orders = numpy.array([sample_theta(rng, config, 100).order
                              for _ in range(n)])
        p = 1.0 / 7
        sigma = numpy.sqrt(p * (1 - p) / n)
        for o in range(3, 10):
            self.assertLess(abs(numpy.mean(orders == o) - p), 4 * sigma)

    def test_draw_order(self):
        config = RstConfig()
        theta = sample_theta(numpy.random.default_rng(9), config, 100)
        replay = numpy.random.default_rng(9)
        self.assertEqual(theta.order, replay.integers(3, 10))
        self.assertEqual(theta.num_basis, replay.integers(11, 51))

    def test_tree_seed(self):
        self.assertEqual(tree_seed(0, 0), tree_seed(0, 0))
        self.assertNotEqual(tree_seed(0, 0), tree_seed(0, 1))
        self.assertNotEqual(tree_seed(0, 0), tree_seed(1, 0))


class FitRstTests(unittest.TestCase):

    def test_single_tree_composition(self):
        data = tiny_dataset()
        config = RstConfig(n_estimators=1, order_range=(3, 3),
                           nbasis_range=(5, 5))
        ensemble = fit_rst(data, config)
        cm = coefficients_matrix(data.series, 3, 5)
        expected = grow_tree(cm.coeffs, data.labels, TreeParams(),
                             num_classes=2)
        self.assertEqual(len(ensemble), 1)
        self.assertEqual(ensemble.members[0].tree, expected)
        for row, coeffs in zip(data.series, cm.coeffs):
            self.assertEqual(predict(ensemble, row),
                             int(expected.predict(coeffs[None, :])[0]))

    def test_empty(self):
        with self.assertRaises(InvalidInputException):
            fit_rst(None, RstConfig())

    def test_members_use_own_representation(self):
        train, _ = synth_dataset(10, 32, 0.3)
        ensemble = fit_rst(train, RstConfig(n_estimators=20))
        for m in ensemble.members:
            self.assertEqual(m.tree.num_features, m.theta.num_basis)
            used = m.tree.feature[m.tree.feature >= 0]
            self.assertTrue(numpy.all(used < m.theta.num_basis))
            self.assertEqual(m.basis.key, (m.theta.order, m.theta.num_basis))

    def test_seed_isolation(self):
        train, _ = synth_dataset(10, 64, 0.3)
        a = fit_rst(train, RstConfig(n_estimators=20, master_seed=1))
        b = fit_rst(train, RstConfig(n_estimators=20, master_seed=2))
        thetas_a = [m.theta for m in a.members]
        thetas_b = [m.theta for m in b.members]
        self.assertNotEqual(thetas_a, thetas_b)
        for theta in thetas_a + thetas_b:
            self.assertTrue(3 <= theta.order <= 9)
            self.assertTrue(11 <= theta.num_basis <= 50)

    def test_theta_summary(self):
        train, _ = synth_dataset(5, 24, 0.3)
        ensemble = fit_rst(train, RstConfig(n_estimators=30))
        summary = ensemble.theta_summary()
        self.assertLessEqual(summary['nbasis_max'], 24)
        self.assertGreaterEqual(summary['order_min'], 3)
        self.assertGreater(summary['clamped'], 0)
        self.assertGreater(summary['drawn_nbasis_max'], 24)


@pytest.mark.usefixtures("synthetic")
class SyntheticEnsembleTests(unittest.TestCase):

    def test_deterministic_variants(self):
        for name in VARIANTS:
            config = variant_config(name, n_estimators=25, master_seed=4)
            a, _ = predict_batch(fit_rst(self.train, config), self.test)
            b, _ = predict_batch(fit_rst(self.train, config), self.test)
            numpy.testing.assert_array_equal(a, b)

    def test_workers_do_not_change_results(self):
        config = variant_config('RST-RB', n_estimators=16, master_seed=2)
        serial = fit_rst(self.train, config, workers=1)
        parallel = fit_rst(self.train, config, workers=4)
        for m, n in zip(serial.members, parallel.members):
            self.assertEqual(m.theta, n.theta)
            self.assertEqual(m.tree, n.tree)

    def test_accuracy(self):
        for name in ('RST-R', 'RST-B'):
            ensemble = fit_rst(self.train, variant_config(name))
            _, acc = predict_batch(ensemble, self.test)
            self.assertGreaterEqual(acc, 0.95)

    def test_rf_accuracy(self):
        forest = fit_rf_baseline(self.train, n_estimators=100, seed=0)
        _, acc = predict_batch(forest, self.test)
        self.assertGreaterEqual(acc, 0.90)

    def test_training_accuracy(self):
        ensemble = fit_rst(self.train, variant_config('RST-B'))
        _, acc = predict_batch(ensemble, self.train)
        self.assertEqual(acc, 1.0)

    def test_vote_conservation(self):
        ensemble = fit_rst(self.train, variant_config('RST-R',
                                                      n_estimators=15))
        votes = ensemble.votes(self.test.series)
        numpy.testing.assert_array_equal(votes.sum(axis=0), 15)
        numpy.testing.assert_array_equal(
            numpy.argmax(votes, axis=0) + 1, ensemble.predict(self.test.series))

    def test_single_member(self):
        ensemble = fit_rst(self.train, variant_config('RST-R',
                                                      n_estimators=1))
        m = ensemble.members[0]
        expected = m.tree.predict(m.features(self.test.series))
        labels, _ = predict_batch(ensemble, self.test)
        numpy.testing.assert_array_equal(labels, expected)

    def test_identical_series(self):
        ensemble = fit_rst(self.train, variant_config('RST-R',
                                                      n_estimators=10))
        same = Dataset(numpy.tile(self.test.series[3], (6, 1)),
                       [1] * 6, {1: 1, 2: 2})
        labels, _ = predict_batch(ensemble, same)
        self.assertEqual(len(set(labels)), 1)

    def test_permuted_labels_recount(self):
        ensemble = fit_rst(self.train, variant_config('RST-R',
                                                      n_estimators=10))
        labels, acc = predict_batch(ensemble, self.test)
        swapped = Dataset(self.test.series, 3 - self.test.labels,
                          self.test.label_map)
        _, swapped_acc = predict_batch(ensemble, swapped)
        self.assertAlmostEqual(acc + swapped_acc, 1.0, delta=1e-12)
        self.assertEqual(acc, numpy.mean(labels == self.test.labels))

    def test_wrong_length(self):
        ensemble = fit_rst(self.train, variant_config('RST-R',
                                                      n_estimators=3))
        with self.assertRaises(InvalidInputException):
            predict(ensemble, numpy.zeros(63))
        with self.assertRaises(InvalidInputException):
            ensemble.predict(numpy.zeros((2, 65)))

    def test_prefix_predictions(self):
        config = variant_config('RST-BB', n_estimators=12, master_seed=8)
        full = fit_rst(self.train, config)
        small = fit_rst(self.train, config.replace(n_estimators=5))
        preds = member_predictions(full, self.test)
        numpy.testing.assert_array_equal(
            vote(preds, 2, 5), small.predict(self.test.series))
        numpy.testing.assert_array_equal(
            member_predictions(full, self.test, 5),
            member_predictions(small, self.test))

    def test_more_trees_do_not_hurt(self):
        for name in VARIANTS:
            small = []
            large = []
            for seed in range(10):
                ensemble = fit_rst(self.train,
                                   variant_config(name, master_seed=seed))
                preds = member_predictions(ensemble, self.test)
                small.append(accuracy(vote(preds, 2, 5), self.test.labels))
                large.append(accuracy(vote(preds, 2), self.test.labels))
            self.assertGreaterEqual(numpy.mean(large), numpy.mean(small))


@pytest.mark.usefixtures("synthetic")
class RandomForestTests(unittest.TestCase):

    def test_single_cart_tree(self):
        forest = fit_rf_baseline(self.train, n_estimators=1,
                                 mtry=self.train.length, bootstrap=False)
        expected = grow_tree(self.train.series, self.train.labels,
                             num_classes=2)
        self.assertEqual(forest.members[0].tree, expected)

    def test_deterministic(self):
        a = fit_rf_baseline(self.train, n_estimators=20, seed=3)
        b = fit_rf_baseline(self.train, n_estimators=20, seed=3, workers=3)
        numpy.testing.assert_array_equal(a.predict(self.test.series),
                                         b.predict(self.test.series))

    def test_mtry(self):
        forest = fit_rf_baseline(self.train, n_estimators=2)
        self.assertEqual(forest.config.mtry(64), 8)
        self.assertIsNone(forest.members[0].basis)


class VoteTests(unittest.TestCase):

    def test_majority(self):
        numpy.testing.assert_array_equal(vote([[1], [1], [2]], 2), [1])

    def test_tie_lowest_class(self):
        numpy.testing.assert_array_equal(vote([[2], [1]], 2), [1])
        numpy.testing.assert_array_equal(vote([[3], [2]], 3), [2])

    def test_prefix(self):
        preds = [[2, 1], [2, 1], [1, 2], [1, 2], [1, 2]]
        numpy.testing.assert_array_equal(vote(preds, 2, 2), [2, 1])
        numpy.testing.assert_array_equal(vote(preds, 2), [1, 2])

    def test_accuracy(self):
        self.assertEqual(accuracy([1, 2, 2, 1], [1, 2, 1, 1]), 0.75)
        with self.assertRaises(InvalidInputException):
            accuracy([1, 2], [1])


if __name__ == '__main__':
    pytest.main([__file__])
