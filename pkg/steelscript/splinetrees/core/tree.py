# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.

"""
CART-style binary classification trees over coefficient rows.

Class ids are the integers 1..Z.  Two split strategies are supported:
``best`` scans every midpoint of every feature, ``random`` draws one
uniform threshold per non-constant feature and keeps the best of those.
Ties are always broken towards the lowest feature index, then the
smallest threshold, then the lowest class id.
"""

import logging
from collections import namedtuple

import numpy

from steelscript.splinetrees.core._exceptions import InvalidInputException
from steelscript.splinetrees.core._types import SplitStrategy, TreeParams

__all__ = ['SplitCandidate', 'DecisionTree', 'gini', 'best_split',
           'random_split', 'grow_tree', 'predict_tree']

logger = logging.getLogger(__name__)

LEAF = -1

# Decreases at or below this are treated as "no improvement"
MIN_DECREASE = 1e-12

SplitCandidate = namedtuple('SplitCandidate',
                            ['feature_index', 'threshold',
                             'impurity_decrease'])


def gini(counts):
    """Gini impurity 1 - sum_z (n_z / n)^2 of a class-count histogram."""
    counts = numpy.asarray(counts, dtype=float)
    total = counts.sum()
    if total <= 0:
        raise InvalidInputException('gini of an empty histogram is undefined')
    p = counts / total
    return float(1.0 - numpy.sum(p * p))


def _weighted_decrease(parent_counts, left_counts):
    """Gini decrease for one or many (left, right) partitions of a node.

    `left_counts` has shape (..., Z); the right side is the complement.
    """
    parent_counts = numpy.asarray(parent_counts, dtype=float)
    left_counts = numpy.asarray(left_counts, dtype=float)
    right_counts = parent_counts - left_counts

    n = parent_counts.sum()
    n_left = left_counts.sum(axis=-1)
    n_right = n - n_left

    with numpy.errstate(divide='ignore', invalid='ignore'):
        g_left = 1.0 - numpy.sum(
            (left_counts / numpy.asarray(n_left)[..., None]) ** 2, axis=-1)
        g_right = 1.0 - numpy.sum(
            (right_counts / numpy.asarray(n_right)[..., None]) ** 2, axis=-1)

    decrease = (gini(parent_counts) -
                (n_left / n) * g_left - (n_right / n) * g_right)
    # an empty child is never a split
    empty = (n_left == 0) | (n_right == 0)
    return numpy.where(empty, 0.0, decrease)


def _prepare(matrix, labels, row_subset, num_classes):
    matrix = numpy.asarray(matrix, dtype=float)
    labels = numpy.asarray(labels, dtype=int)
    rows = numpy.asarray(row_subset, dtype=int)
    if rows.size == 0:
        raise InvalidInputException('cannot split an empty row subset')
    if num_classes is None:
        num_classes = int(labels.max())
    return matrix, labels, rows, num_classes


def _pick(candidates):
    """Best candidate in feature order; strict improvement keeps the
    lowest feature on ties."""
    best = None
    for cand in candidates:
        if cand.impurity_decrease <= MIN_DECREASE:
            continue
        if best is None or cand.impurity_decrease > best.impurity_decrease:
            best = cand
    return best


def best_split(matrix, labels, row_subset, features=None, num_classes=None):
    """Exhaustive split search over `features` (default: all columns).

    :param matrix: N x K feature matrix
    :param labels: N class ids in 1..Z
    :param row_subset: indices of the rows in the node
    :returns: :class:`SplitCandidate` or None if no split has a positive
        Gini decrease
    """
    matrix, labels, rows, z = _prepare(matrix, labels, row_subset,
                                       num_classes)
    if features is None:
        features = range(matrix.shape[1])

    y = labels[rows] - 1
    parent = numpy.bincount(y, minlength=z)
    if rows.size < 2 or parent.max() == rows.size:
        return None

    onehot = numpy.zeros((rows.size, z))
    candidates = []
    for f in features:
        values = matrix[rows, f]
        order = numpy.argsort(values, kind='mergesort')
        sv = values[order]
        distinct = sv[:-1] < sv[1:]
        if not numpy.any(distinct):
            continue

        onehot[:] = 0.0
        onehot[numpy.arange(rows.size), y[order]] = 1.0
        left = numpy.cumsum(onehot, axis=0)[:-1]

        decrease = _weighted_decrease(parent, left)
        decrease[~distinct] = -numpy.inf
        pos = int(numpy.argmax(decrease))

        mid = (sv[pos] + sv[pos + 1]) / 2.0
        # adjacent floats: the midpoint may round up onto the right value
        threshold = mid if mid < sv[pos + 1] else sv[pos]
        candidates.append(SplitCandidate(int(f), float(threshold),
                                         float(decrease[pos])))

    return _pick(candidates)


def random_split(matrix, labels, row_subset, rng, features=None,
                 num_classes=None):
    """Randomized split search.

    Features are visited in ascending order (or the order of `features`);
    every non-constant feature consumes exactly one ``rng.random()`` draw
    and gets the threshold lo + u * (hi - lo).  Constant features consume
    nothing.  The best drawn candidate is returned, or None.
    """
    matrix, labels, rows, z = _prepare(matrix, labels, row_subset,
                                       num_classes)
    if features is None:
        features = range(matrix.shape[1])

    y = labels[rows] - 1
    parent = numpy.bincount(y, minlength=z)
    if rows.size < 2 or parent.max() == rows.size:
        return None

    candidates = []
    for f in features:
        values = matrix[rows, f]
        lo = values.min()
        hi = values.max()
        if not lo < hi:
            continue

        threshold = lo + rng.random() * (hi - lo)
        left = numpy.bincount(y[values <= threshold], minlength=z)
        decrease = float(_weighted_decrease(parent, left))
        candidates.append(SplitCandidate(int(f), float(threshold), decrease))

    return _pick(candidates)


class DecisionTree(object):
    """A grown classification tree stored as flat node arrays.

    Node 0 is the root.  For an internal node ``feature >= 0`` and rows with
    ``value <= threshold`` go to ``left``; leaves have ``feature == -1``.
    ``counts[node]`` is the training class histogram that reached the node.
    """
    def __init__(self, feature, threshold, left, right, counts,
                 num_features, params=None, seed=None):
        self.feature = numpy.asarray(feature, dtype=int)
        self.threshold = numpy.asarray(threshold, dtype=float)
        self.left = numpy.asarray(left, dtype=int)
        self.right = numpy.asarray(right, dtype=int)
        self.counts = numpy.asarray(counts, dtype=int)
        self.num_features = int(num_features)
        self.params = params or TreeParams()
        self.seed = seed

        # majority class per node, lowest class id on ties
        self.node_class = numpy.argmax(self.counts, axis=1) + 1

    @property
    def node_count(self):
        return len(self.feature)

    @property
    def num_classes(self):
        return self.counts.shape[1]

    def is_leaf(self, node):
        return self.feature[node] == LEAF

    def depth(self):
        depths = numpy.zeros(self.node_count, dtype=int)
        for node in range(self.node_count):
            if not self.is_leaf(node):
                depths[self.left[node]] = depths[node] + 1
                depths[self.right[node]] = depths[node] + 1
        return int(depths.max())

    def apply(self, matrix):
        """Return the leaf index reached by every row of `matrix`."""
        matrix = numpy.atleast_2d(numpy.asarray(matrix, dtype=float))
        if matrix.shape[1] != self.num_features:
            raise InvalidInputException(
                'rows of width {0} do not match tree trained on {1} '
                'features'.format(matrix.shape[1], self.num_features))

        nodes = numpy.zeros(matrix.shape[0], dtype=int)
        active = numpy.nonzero(self.feature[nodes] != LEAF)[0]
        while active.size:
            at = nodes[active]
            go_left = (matrix[active, self.feature[at]] <=
                       self.threshold[at])
            nodes[active] = numpy.where(go_left, self.left[at],
                                        self.right[at])
            active = active[self.feature[nodes[active]] != LEAF]
        return nodes

    def predict(self, matrix):
        return self.node_class[self.apply(matrix)]

    def structure(self):
        """Tuple view of the node arrays, for equality checks."""
        return (tuple(self.feature), tuple(self.threshold),
                tuple(self.left), tuple(self.right),
                tuple(map(tuple, self.counts)))

    def __eq__(self, other):
        return (isinstance(other, DecisionTree) and
                self.structure() == other.structure())

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        msg = ('<steelscript.splinetrees.core.tree.DecisionTree('
               'nodes={0} features={1} classes={2})>')
        return msg.format(self.node_count, self.num_features,
                          self.num_classes)


def grow_tree(matrix, labels, params=None, seed=None, num_classes=None,
              rng=None):
    """Grow a tree by recursive partitioning.

    :param matrix: N x K training matrix
    :param labels: N class ids in 1..Z
    :param params: :class:`TreeParams`, defaults to best splits,
        min_samples_split=2 and unlimited depth
    :param int seed: seed of the generator used for random splits and
        feature subsampling
    :param int num_classes: Z, defaults to ``max(labels)``
    :param rng: optional ``numpy.random.Generator`` to draw from instead of
        a fresh generator seeded with `seed`

    A node becomes a leaf when it is pure, has fewer than
    min_samples_split rows, sits at max_depth, or has no split with a
    positive decrease.  Nodes are expanded depth-first, left child first,
    which fixes the order in which random draws are consumed.
    """
    params = params or TreeParams()
    matrix = numpy.asarray(matrix, dtype=float)
    labels = numpy.asarray(labels, dtype=int)

    if matrix.ndim != 2 or matrix.shape[0] == 0:
        raise InvalidInputException('cannot grow a tree on an empty '
                                    'training set')
    if labels.shape != (matrix.shape[0],):
        raise InvalidInputException('expected {0} labels, got {1}'
                                    .format(matrix.shape[0], labels.shape))
    if labels.min() < 1:
        raise InvalidInputException('class ids must start at 1')

    z = int(num_classes or labels.max())
    if rng is None:
        rng = numpy.random.default_rng(seed)

    n_features = matrix.shape[1]
    mtry = params.max_features
    subsample = mtry is not None and mtry < n_features

    feature = []
    threshold = []
    left = []
    right = []
    counts = []

    def new_node():
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        counts.append(None)
        return len(feature) - 1

    stack = [(new_node(), numpy.arange(matrix.shape[0]), 0)]
    while stack:
        node, rows, depth = stack.pop()
        hist = numpy.bincount(labels[rows] - 1, minlength=z)
        counts[node] = hist

        if (hist.max() == rows.size or
                rows.size < params.min_samples_split or
                (params.max_depth is not None and
                 depth >= params.max_depth)):
            continue

        if subsample:
            features = numpy.sort(rng.choice(n_features, size=mtry,
                                             replace=False))
        else:
            features = None

        if params.split_strategy == SplitStrategy.RANDOM:
            split = random_split(matrix, labels, rows, rng,
                                 features=features, num_classes=z)
        else:
            split = best_split(matrix, labels, rows,
                               features=features, num_classes=z)
        if split is None:
            continue

        mask = matrix[rows, split.feature_index] <= split.threshold
        lnode = new_node()
        rnode = new_node()
        feature[node] = split.feature_index
        threshold[node] = split.threshold
        left[node] = lnode
        right[node] = rnode

        stack.append((rnode, rows[~mask], depth + 1))
        stack.append((lnode, rows[mask], depth + 1))

    tree = DecisionTree(feature, threshold, left, right, numpy.array(counts),
                        n_features, params=params, seed=seed)
    logger.debug('Grew tree with %d nodes, depth %d'
                 % (tree.node_count, tree.depth()))
    return tree


def predict_tree(tree, row):
    """Class id of the leaf `row` is routed to."""
    row = numpy.asarray(row, dtype=float)
    if row.shape != (tree.num_features,):
        raise InvalidInputException('row of shape {0} does not match tree '
                                    'trained on {1} features'
                                    .format(row.shape, tree.num_features))
    return int(tree.predict(row[None, :])[0])
