# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.


from steelscript.splinetrees.core.dataset import (Dataset, Split, load_ucr,
                                                  write_ucr, synth_dataset,
                                                  dataset_summary, ucr_paths,
                                                  load_ucr_pair)
from steelscript.splinetrees.core._exceptions import (DatasetException,
                                                      RaggedRowException,
                                                      InvalidInputException)

import os
import shutil
import logging
import tempfile
import unittest

import numpy
import pytest


logger = logging.getLogger(__name__)
logging.basicConfig(level=logging.DEBUG,
                    format="%(asctime)s [%(levelname)-5.5s] %(message)s")

UCR_ROOT = os.environ.get('SPLINETREES_UCR_ROOT')


class LoadUcrTests(unittest.TestCase):

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def write(self, name, text):
        path = os.path.join(self.tmpdir, name)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)
        return path

    def test_two_lines(self):
        ds = load_ucr(self.write('Tiny_TRAIN.tsv', '1\t0.5\t0.7\n2\t0.1\t0.2'))
        self.assertEqual(len(ds), 2)
        self.assertEqual(ds.length, 2)
        numpy.testing.assert_array_equal(ds.labels, [1, 2])
        numpy.testing.assert_array_equal(ds.series, [[0.5, 0.7], [0.1, 0.2]])
        self.assertEqual(ds.name, 'Tiny')
        self.assertEqual(ds.split, Split.TRAIN)

    def test_comma_and_blank_lines(self):
        ds = load_ucr(self.write('x.csv', '\n3,1,2,3\n\n1,4,5,6\n'))
        self.assertEqual(len(ds), 2)
        numpy.testing.assert_array_equal(ds.labels, [2, 1])
        self.assertEqual(ds.label_map, {1: 1, 3: 2})

    def test_whitespace_fallback(self):
        ds = load_ucr(self.write('x.txt', '  1.0000000e+00  2.0  3.0\n'
                                          '  2.0000000e+00  4.0  5.0\n'))
        self.assertEqual(ds.length, 2)
        numpy.testing.assert_array_equal(ds.labels, [1, 2])

    def test_remap_preserves_order(self):
        ds = load_ucr(self.write('x.tsv', '-1\t0\t0\n5\t1\t1\n2\t2\t2\n'))
        numpy.testing.assert_array_equal(ds.labels, [1, 3, 2])
        self.assertEqual(ds.original_labels(), [-1, 5, 2])

    def test_ragged_row(self):
        path = self.write('x.tsv', '1\t0.5\t0.7\n2\t0.1\n1\t0.3\t0.3\n')
        with self.assertRaises(RaggedRowException) as cm:
            load_ucr(path)
        self.assertEqual(cm.exception.lineno, 2)
        self.assertIn(':2:', str(cm.exception))

    def test_unparsable(self):
        with self.assertRaises(DatasetException):
            load_ucr(self.write('x.tsv', '1\t0.5\tabc\n'))

    def test_empty_field(self):
        path = self.write('x.tsv', '1\t0.1\t\t0.3\n2\t0.4\t0.5\t0.6\n')
        with self.assertRaises(DatasetException) as cm:
            load_ucr(path)
        self.assertNotIsInstance(cm.exception, RaggedRowException)
        self.assertIn(':1: unparsable', str(cm.exception))

        path = self.write('y.tsv', '1\t0.1\t\t0.3\n2\t0.4\t\t0.6\n')
        with self.assertRaises(DatasetException):
            load_ucr(path)
        with self.assertRaises(DatasetException):
            load_ucr(self.write('z.csv', '1,0.1,,0.3\n'))

    def test_padded_fields(self):
        ds = load_ucr(self.write('x.tsv', '1\t 0.5 \t0.7\n2 ,0.1, 0.2\n'))
        numpy.testing.assert_array_equal(ds.series, [[0.5, 0.7], [0.1, 0.2]])

    def test_non_finite(self):
        with self.assertRaises(DatasetException):
            load_ucr(self.write('x.tsv', '1\t0.5\tnan\n'))
        with self.assertRaises(DatasetException):
            load_ucr(self.write('y.tsv', '1\tinf\t0.5\n'))

    def test_missing_file(self):
        with self.assertRaises(DatasetException):
            load_ucr(os.path.join(self.tmpdir, 'nope.tsv'))

    def test_empty_file(self):
        with self.assertRaises(DatasetException):
            load_ucr(self.write('x.tsv', '\n\n'))

    def test_single_class(self):
        ds = load_ucr(self.write('x.tsv', '4\t1\t2\n4\t3\t4\n'))
        self.assertTrue(ds.single_class)
        self.assertEqual(ds.num_classes, 1)

    def test_shared_label_map(self):
        train = load_ucr(self.write('D_TRAIN.tsv', '1\t0\t0\n2\t1\t1\n'))
        test = load_ucr(self.write('D_TEST.tsv', '2\t0\t0\n2\t1\t1\n'),
                        label_map=train.label_map)
        numpy.testing.assert_array_equal(test.labels, [2, 2])
        self.assertEqual(test.split, Split.TEST)
        with self.assertRaises(DatasetException):
            load_ucr(self.write('E_TEST.tsv', '3\t0\t0\n'),
                     label_map=train.label_map)

    def test_no_rows_dropped(self):
        lines = ['%d\t%f\t%f' % (1 + i % 3, i, -i) for i in range(37)]
        ds = load_ucr(self.write('x.tsv', '\n'.join(lines)))
        self.assertEqual(len(ds), 37)

    def test_round_trip(self):
        train, _ = synth_dataset(7, 16, 0.4, seed=3)
        path = os.path.join(self.tmpdir, 'synthetic_TRAIN.tsv')
        write_ucr(train, path)
        ds = load_ucr(path)
        numpy.testing.assert_allclose(ds.series, train.series, rtol=0,
                                      atol=1e-12)
        numpy.testing.assert_array_equal(ds.labels, train.labels)

    def test_pair(self):
        train, test = synth_dataset(4, 10, 0.1)
        os.makedirs(os.path.join(self.tmpdir, 'Syn'))
        write_ucr(train, os.path.join(self.tmpdir, 'Syn', 'Syn_TRAIN.txt'))
        write_ucr(test, os.path.join(self.tmpdir, 'Syn', 'Syn_TEST.txt'),
                  delimiter=',')
        paths = ucr_paths(self.tmpdir, 'Syn')
        self.assertTrue(paths[0].endswith('Syn_TRAIN.txt'))
        a, b = load_ucr_pair(self.tmpdir, 'Syn')
        self.assertEqual(a.label_map, b.label_map)
        self.assertEqual((a.name, b.name), ('Syn', 'Syn'))
        self.assertEqual(len(b), 4)
        with self.assertRaises(DatasetException):
            ucr_paths(self.tmpdir, 'Other')


class DatasetTests(unittest.TestCase):

    def test_validation(self):
        with self.assertRaises(DatasetException):
            Dataset(numpy.zeros((2, 1)), [1, 1], {1: 1})
        with self.assertRaises(DatasetException):
            Dataset(numpy.zeros((2, 3)), [1], {1: 1})
        with self.assertRaises(DatasetException):
            Dataset(numpy.zeros((2, 3)), [1, 3], {1: 1, 3: 3})
        with self.assertRaises(DatasetException):
            Dataset([[0.0, numpy.nan]], [1], {1: 1})

    def test_read_only(self):
        train, _ = synth_dataset(2, 8, 0.0)
        with self.assertRaises(ValueError):
            train.series[0, 0] = 1.0


class SynthDatasetTests(unittest.TestCase):

    def test_noiseless(self):
        train, test = synth_dataset(3, 16, 0.0)
        t = numpy.arange(16) / 15.0
        for row, label in zip(train.series, train.labels):
            numpy.testing.assert_allclose(
                row, numpy.sin(2 * numpy.pi * label * t), atol=1e-15)
        numpy.testing.assert_array_equal(train.labels, [1, 2, 1])
        numpy.testing.assert_array_equal(test.labels, [2, 1, 2])

    def test_class_balance(self):
        for n in (1, 2, 3, 10, 11):
            train, test = synth_dataset(n, 16, 0.1)
            self.assertEqual((len(train), len(test)), (n, n))
            total = train.class_histogram() + test.class_histogram()
            numpy.testing.assert_array_equal(total, [n, n])
            for ds in (train, test):
                hist = ds.class_histogram()
                self.assertLessEqual(abs(int(hist[0]) - int(hist[1])), 1)

    def test_deterministic(self):
        a = synth_dataset(10, 32, 0.3, seed=5)
        b = synth_dataset(10, 32, 0.3, seed=5)
        for x, y in zip(a, b):
            numpy.testing.assert_array_equal(x.series, y.series)
            numpy.testing.assert_array_equal(x.labels, y.labels)

    def test_nearest_prototype(self):
        _, test = synth_dataset(50, 64, 0.1, seed=1)
        t = numpy.arange(64) / 63.0
        prototypes = numpy.array([numpy.sin(2 * numpy.pi * t),
                                  numpy.sin(4 * numpy.pi * t)])
        dist = ((test.series[:, None, :] - prototypes[None, :, :]) ** 2
                ).sum(axis=2)
        predicted = numpy.argmin(dist, axis=1) + 1
        self.assertGreaterEqual(numpy.mean(predicted == test.labels), 0.99)

    def test_preconditions(self):
        with self.assertRaises(InvalidInputException):
            synth_dataset(0, 16, 0.1)
        with self.assertRaises(InvalidInputException):
            synth_dataset(5, 7, 0.1)
        with self.assertRaises(InvalidInputException):
            synth_dataset(5, 16, -1.0)

    def test_summary(self):
        train, test = synth_dataset(10, 32, 0.1)
        summary = dataset_summary(train)
        self.assertEqual((summary.n, summary.length, summary.classes),
                         (10, 32, 2))
        self.assertEqual(sum(summary.histogram), 10)
        self.assertEqual(dataset_summary(test).split, Split.TEST)


@pytest.mark.skipif(UCR_ROOT is None,
                    reason='SPLINETREES_UCR_ROOT is not set')
class ArchiveTests(unittest.TestCase):

    def test_italy_power_demand(self):
        train, test = load_ucr_pair(UCR_ROOT, 'ItalyPowerDemand')
        s = dataset_summary(train)
        self.assertEqual((s.n, s.length, s.classes), (67, 24, 2))
        self.assertEqual(len(test), 1029)

    def test_rock(self):
        train, _ = load_ucr_pair(UCR_ROOT, 'Rock')
        s = dataset_summary(train)
        self.assertEqual((s.n, s.length, s.classes), (20, 2844, 4))


if __name__ == '__main__':
    pytest.main([__file__])
