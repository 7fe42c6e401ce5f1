# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.

"""
The dataset module reads and writes time series classification files in
the UCR archive text layout and generates seeded synthetic datasets.

Each record is one line: the class label followed by the P series
values, separated by tabs or commas.  Blank lines are ignored.  Series
are used exactly as read, no re-normalization is applied.
"""

import os
import re
import logging
from collections import namedtuple

import numpy

from steelscript.splinetrees.core import _constants
from steelscript.splinetrees.core._exceptions import (DatasetException,
                                                      RaggedRowException,
                                                      InvalidInputException)

__all__ = ['Dataset', 'Split', 'load_ucr', 'write_ucr', 'synth_dataset',
           'dataset_summary', 'ucr_paths', 'load_ucr_pair']

logger = logging.getLogger(__name__)

_delimiters = re.compile(r'[\t,]')

DatasetSummary = namedtuple('DatasetSummary',
                            ['name', 'split', 'n', 'length', 'classes',
                             'histogram'])


class Split(object):
    TRAIN = 'train'
    TEST = 'test'


class Dataset(object):
    """N series of common length P with class ids 1..Z.

    :param series: N x P array of finite values
    :param labels: N class ids
    :param dict label_map: original label -> class id
    :param str name: dataset name
    :param str split: :class:`Split` value
    """
    def __init__(self, series, labels, label_map, name='', split=Split.TRAIN):
        self.series = numpy.array(series, dtype=float)
        self.labels = numpy.array(labels, dtype=int)
        self.label_map = dict(label_map)
        self.name = name
        self.split = split

        if self.series.ndim != 2 or self.series.shape[0] < 1:
            raise DatasetException('dataset needs at least one series, got '
                                   'shape {0}'.format(self.series.shape))
        if self.series.shape[1] < 2:
            raise DatasetException('series length must be >= 2, got %d'
                                   % self.series.shape[1])
        if not numpy.all(numpy.isfinite(self.series)):
            raise DatasetException('dataset %s contains non-finite values'
                                   % name)
        if self.labels.shape != (self.series.shape[0],):
            raise DatasetException('expected {0} labels, got {1}'
                                   .format(self.series.shape[0],
                                           self.labels.shape))

        ids = sorted(self.label_map.values())
        if ids != list(range(1, len(ids) + 1)):
            raise DatasetException('class ids must be contiguous from 1, '
                                   'got {0}'.format(ids))
        if self.labels.min() < 1 or self.labels.max() > len(ids):
            raise DatasetException('labels outside the label map of %s'
                                   % name)

        self.series.flags.writeable = False
        self.labels.flags.writeable = False

    def __len__(self):
        return self.series.shape[0]

    @property
    def length(self):
        return self.series.shape[1]

    @property
    def num_classes(self):
        return len(self.label_map)

    @property
    def single_class(self):
        return len(numpy.unique(self.labels)) == 1

    def class_histogram(self):
        """Number of series per class id, index 0 is class 1."""
        return numpy.bincount(self.labels - 1, minlength=self.num_classes)

    def original_labels(self):
        inverse = dict((v, k) for k, v in self.label_map.items())
        return [inverse[c] for c in self.labels]

    def __repr__(self):
        msg = ('<steelscript.splinetrees.core.dataset.Dataset(name={0} '
               'split={1} n={2} length={3} classes={4})>')
        return msg.format(self.name, self.split, len(self), self.length,
                          self.num_classes)


def _parse_number(token, path, lineno):
    try:
        value = float(token)
    except ValueError:
        raise DatasetException('{0}:{1}: unparsable token {2!r}'
                               .format(path, lineno, token))
    if not numpy.isfinite(value):
        raise DatasetException('{0}:{1}: non-finite value {2!r}'
                               .format(path, lineno, token))
    return value


def _label_key(value):
    return int(value) if float(value).is_integer() else value


def _guess_name_and_split(path):
    base = os.path.splitext(os.path.basename(path))[0]
    m = re.match(r'^(?P<name>.*?)_(?P<split>TRAIN|TEST)$', base, re.I)
    if m:
        return m.group('name'), m.group('split').lower()
    return base, None


def load_ucr(path, label_map=None, name=None, split=None):
    """Load one UCR-format file.

    :param str path: file to read
    :param dict label_map: original label -> class id to apply; pass the
        training split's map when loading its test split.  By default
        labels are remapped to 1..Z by ascending original value.
    :param str name: dataset name, guessed from the file name if omitted
    :param str split: :class:`Split` value, guessed from the file name

    Rows of a different length than the first raise
    :class:`RaggedRowException` naming the line.
    """
    if not os.path.exists(path):
        raise DatasetException('dataset file %s not found' % path)

    guessed_name, guessed_split = _guess_name_and_split(path)
    name = name or guessed_name
    split = split or guessed_split or Split.TRAIN

    raw_labels = []
    rows = []
    length = None
    with open(path, encoding='utf-8') as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue

            # one tab or comma per field; an empty field is an error
            tokens = [tok.strip() for tok in _delimiters.split(line)]
            if len(tokens) == 1:
                tokens = line.split()

            values = [_parse_number(tok, path, lineno) for tok in tokens]
            if length is None:
                length = len(values) - 1
            elif len(values) - 1 != length:
                raise RaggedRowException(
                    '{0}:{1}: expected {2} values, found {3}'
                    .format(path, lineno, length, len(values) - 1),
                    lineno=lineno)

            raw_labels.append(_label_key(values[0]))
            rows.append(values[1:])

    if not rows:
        raise DatasetException('dataset file %s has no records' % path)

    if label_map is None:
        label_map = dict((orig, i + 1)
                         for i, orig in enumerate(sorted(set(raw_labels))))
    unknown = set(raw_labels) - set(label_map)
    if unknown:
        raise DatasetException('{0}: labels {1} not in the label map'
                               .format(path, sorted(unknown)))

    ds = Dataset(numpy.array(rows), [label_map[l] for l in raw_labels],
                 label_map, name=name, split=split)
    if ds.single_class:
        logger.warning('Dataset %s (%s) has a single class' % (name, split))
    logger.debug('Loaded %s: %d series of length %d, %d classes'
                 % (path, len(ds), ds.length, ds.num_classes))
    return ds


def write_ucr(ds, path, delimiter='\t'):
    """Write `ds` in UCR text form with round-trip float precision."""
    with open(path, 'w', encoding='utf-8') as f:
        for label, row in zip(ds.original_labels(), ds.series):
            fields = [repr(label)] + [repr(float(v)) for v in row]
            f.write(delimiter.join(fields))
            f.write('\n')
    logger.debug('Wrote %d series to %s' % (len(ds), path))


def ucr_paths(root, name):
    """Locate ``<root>/<name>/<name>_TRAIN`` and ``_TEST`` files.

    Both the ``.tsv`` (2018 release) and ``.txt`` (2015 release) suffixes
    are accepted.
    """
    found = []
    for part in ('TRAIN', 'TEST'):
        base = os.path.join(root, name, '{0}_{1}'.format(name, part))
        for suffix in _constants.UCR_SUFFIXES:
            if os.path.exists(base + suffix):
                found.append(base + suffix)
                break
        else:
            raise DatasetException('no {0} file for {1} under {2}'
                                   .format(part, name, root))
    return tuple(found)


def load_ucr_pair(root, name):
    """Load the train and test splits of `name` with one label map."""
    train_path, test_path = ucr_paths(root, name)
    train = load_ucr(train_path, name=name, split=Split.TRAIN)
    test = load_ucr(test_path, label_map=train.label_map, name=name,
                    split=Split.TEST)
    return train, test


def synth_dataset(n_per_class, length, noise_sd, seed=0):
    """Two-class sine dataset for offline tests.

    Class 1 is sin(2 pi t) and class 2 is sin(4 pi t) on the uniform grid
    t_p = (p - 1) / (P - 1), each plus independent N(0, noise_sd^2) noise.
    The 2 * n_per_class series alternate between the classes; the first
    half is the train split and the second half the test split.
    Each split holds n_per_class series, so for odd n_per_class its two
    class counts differ by one.

    :returns: (train, test) :class:`Dataset` pair
    """
    n_per_class = int(n_per_class)
    length = int(length)
    if n_per_class < 1:
        raise InvalidInputException('n_per_class must be >= 1')
    if length < 8:
        raise InvalidInputException('synthetic series need length >= 8')
    if noise_sd < 0:
        raise InvalidInputException('noise_sd must be >= 0')

    rng = numpy.random.default_rng(seed)
    t = numpy.arange(length) / float(length - 1)

    total = 2 * n_per_class
    labels = 1 + numpy.arange(total) % 2
    series = numpy.sin(2.0 * numpy.pi * labels[:, None] * t[None, :])
    if noise_sd > 0:
        series = series + noise_sd * rng.standard_normal((total, length))

    label_map = {1: 1, 2: 2}
    name = 'synthetic'
    train = Dataset(series[:n_per_class], labels[:n_per_class], label_map,
                    name=name, split=Split.TRAIN)
    test = Dataset(series[n_per_class:], labels[n_per_class:], label_map,
                   name=name, split=Split.TEST)
    return train, test


def dataset_summary(ds):
    """(name, split, N, P, Z, class histogram) of a dataset."""
    return DatasetSummary(ds.name, ds.split, len(ds), ds.length,
                          ds.num_classes, tuple(int(c) for c in
                                                ds.class_histogram()))
