# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.


from collections import namedtuple

from steelscript.splinetrees.core import _constants
from steelscript.splinetrees.core._exceptions import ConfigException


"""
This module contains small value types shared by the tree and ensemble
modules: split strategies, tree growth parameters and the per-tree basis
draw.
"""


class SplitStrategy(object):
    BEST = 'best'
    RANDOM = 'random'

    choices = (BEST, RANDOM)

    @classmethod
    def parse(cls, value):
        if isinstance(value, bytes):
            value = value.decode('utf8')
        value = str(value).lower()
        if value not in cls.choices:
            raise ConfigException('{0} is not a valid split strategy, '
                                  'expected one of {1}'.format(value,
                                                               cls.choices))
        return value


class TreeParams(object):
    """Growth parameters for a single decision tree."""
    def __init__(self, split_strategy=SplitStrategy.BEST,
                 min_samples_split=_constants.MIN_SAMPLES_SPLIT,
                 max_depth=None, max_features=None):
        # max_features is the per-node feature subsample (mtry).  It is
        # only set for the raw-value forest baseline; spline trees always
        # look at every coefficient column.
        self.split_strategy = SplitStrategy.parse(split_strategy)
        self.min_samples_split = int(min_samples_split)
        self.max_depth = None if max_depth is None else int(max_depth)
        self.max_features = None if max_features is None else int(max_features)

        if self.min_samples_split < 2:
            raise ConfigException('min_samples_split must be >= 2, got %d'
                                  % self.min_samples_split)
        if self.max_depth is not None and self.max_depth < 1:
            raise ConfigException('max_depth must be >= 1, got %d'
                                  % self.max_depth)
        if self.max_features is not None and self.max_features < 1:
            raise ConfigException('max_features must be >= 1, got %d'
                                  % self.max_features)

    def to_dict(self):
        return {'split_strategy': self.split_strategy,
                'min_samples_split': self.min_samples_split,
                'max_depth': self.max_depth,
                'max_features': self.max_features}

    @classmethod
    def from_dict(cls, d):
        return cls(**d)

    def replace(self, **kwargs):
        d = self.to_dict()
        d.update(kwargs)
        return TreeParams(**d)

    def __eq__(self, other):
        return (isinstance(other, TreeParams) and
                self.to_dict() == other.to_dict())

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        msg = ('<steelscript.splinetrees.core._types.TreeParams('
               'split_strategy={0} min_samples_split={1} max_depth={2} '
               'max_features={3})>')
        return msg.format(self.split_strategy, self.min_samples_split,
                          self.max_depth, self.max_features)


# order and num_basis are the effective values used to build the basis;
# drawn_num_basis keeps the value before clamping to the series length.
ThetaDraw = namedtuple('ThetaDraw',
                       ['order', 'num_basis', 'drawn_num_basis', 'clamped'])
