# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.

"""
This module contains the randomized spline tree ensemble and the plain
random forest baseline it is compared against.

Every spline tree draws its own basis parameters (order, number of basis
functions), fits the training series on that basis and grows a decision
tree on the resulting coefficient matrix.  A new series is classified by
fitting it on each member's basis, routing it through the member's tree
and taking the majority vote.

Each tree t owns a generator seeded with ``tree_seed(master_seed, t)``.
Draws are taken from it in a fixed order: basis order, basis count,
bootstrap row indices (when enabled), then whatever the tree growth
consumes.  Results therefore do not depend on the number of workers.
"""

import logging
import threading
from concurrent.futures import ThreadPoolExecutor

import numpy

from steelscript.splinetrees.core import _constants
from steelscript.splinetrees.core._exceptions import (ConfigException,
                                                      InvalidInputException)
from steelscript.splinetrees.core._types import (SplitStrategy, ThetaDraw,
                                                 TreeParams)
from steelscript.splinetrees.core.bspline import (make_basis, design_matrix,
                                                  effective_num_basis)
from steelscript.splinetrees.core.tree import grow_tree

__all__ = ['RstConfig', 'RfConfig', 'EnsembleMember', 'RstEnsemble',
           'RandomForest', 'variant_config', 'alt_label', 'tree_seed', 'sample_theta',
           'fit_rst', 'fit_rf_baseline', 'predict', 'predict_batch',
           'member_predictions', 'vote', 'accuracy']

logger = logging.getLogger(__name__)


class RstConfig(object):
    """Hyperparameters of a randomized spline tree ensemble.

    :param int n_estimators: number of trees T
    :param tuple order_range: inclusive (o_min, o_max)
    :param tuple nbasis_range: inclusive (k_min, k_max)
    :param str split_strategy: ``best`` or ``random``
    :param bool bootstrap: resample training rows per tree
    :param tree_params: :class:`TreeParams`; its split strategy is
        overridden by `split_strategy`
    :param int master_seed: non-negative seed all tree seeds derive from
    """
    def __init__(self, n_estimators=_constants.N_ESTIMATORS,
                 order_range=_constants.ORDER_RANGE,
                 nbasis_range=_constants.NBASIS_RANGE,
                 split_strategy=SplitStrategy.BEST, bootstrap=False,
                 tree_params=None, master_seed=0):
        self.n_estimators = int(n_estimators)
        self.o_min, self.o_max = (int(v) for v in order_range)
        self.k_min, self.k_max = (int(v) for v in nbasis_range)
        self.split_strategy = SplitStrategy.parse(split_strategy)
        self.bootstrap = bool(bootstrap)
        self.tree_params = (tree_params or TreeParams()).replace(
            split_strategy=self.split_strategy, max_features=None)
        self.master_seed = int(master_seed)
        self.validate()

    def validate(self):
        if self.n_estimators < 1:
            raise ConfigException('n_estimators must be >= 1, got %d'
                                  % self.n_estimators)
        if not (1 <= self.o_min <= self.o_max <= self.k_min <= self.k_max):
            raise ConfigException(
                'basis ranges must satisfy 1 <= o_min <= o_max <= k_min <= '
                'k_max, got o in [{0}, {1}], K in [{2}, {3}]'
                .format(self.o_min, self.o_max, self.k_min, self.k_max))
        if self.master_seed < 0:
            raise ConfigException('master_seed must be non-negative')

    @property
    def order_range(self):
        return (self.o_min, self.o_max)

    @property
    def nbasis_range(self):
        return (self.k_min, self.k_max)

    def replace(self, **kwargs):
        d = self.to_dict()
        d['tree_params'] = TreeParams.from_dict(d['tree_params'])
        d.update(kwargs)
        return RstConfig(**d)

    def to_dict(self):
        return {'n_estimators': self.n_estimators,
                'order_range': list(self.order_range),
                'nbasis_range': list(self.nbasis_range),
                'split_strategy': self.split_strategy,
                'bootstrap': self.bootstrap,
                'tree_params': self.tree_params.to_dict(),
                'master_seed': self.master_seed}

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        if d.get('tree_params') is not None:
            d['tree_params'] = TreeParams.from_dict(d['tree_params'])
        return cls(**d)

    def __eq__(self, other):
        return (isinstance(other, RstConfig) and
                self.to_dict() == other.to_dict())

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return ('<steelscript.splinetrees.core.ensemble.RstConfig({0})>'
                .format(self.to_dict()))


class RfConfig(object):
    """Hyperparameters of the raw-value random forest baseline.

    `max_features` of None means ceil(sqrt(P)) once P is known.
    """
    def __init__(self, n_estimators=_constants.N_ESTIMATORS,
                 max_features=None, bootstrap=True, tree_params=None,
                 master_seed=0):
        self.n_estimators = int(n_estimators)
        self.max_features = None if max_features is None else int(max_features)
        self.bootstrap = bool(bootstrap)
        self.tree_params = (tree_params or TreeParams()).replace(
            split_strategy=SplitStrategy.BEST)
        self.master_seed = int(master_seed)

        if self.n_estimators < 1:
            raise ConfigException('n_estimators must be >= 1, got %d'
                                  % self.n_estimators)
        if self.max_features is not None and self.max_features < 1:
            raise ConfigException('max_features must be >= 1')
        if self.master_seed < 0:
            raise ConfigException('master_seed must be non-negative')

    def mtry(self, length):
        if self.max_features is None:
            return int(numpy.ceil(numpy.sqrt(length)))
        return min(self.max_features, length)

    def replace(self, **kwargs):
        d = self.to_dict()
        d['tree_params'] = TreeParams.from_dict(d['tree_params'])
        d.update(kwargs)
        return RfConfig(**d)

    def to_dict(self):
        return {'n_estimators': self.n_estimators,
                'max_features': self.max_features,
                'bootstrap': self.bootstrap,
                'tree_params': self.tree_params.to_dict(),
                'master_seed': self.master_seed}

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        if d.get('tree_params') is not None:
            d['tree_params'] = TreeParams.from_dict(d['tree_params'])
        return cls(**d)


def variant_config(name, **kwargs):
    """RstConfig for a named variant (RST-B, RST-R, RST-BB, RST-RB).

    B/R select the best or random split strategy, a trailing B turns on
    bootstrap.  Extra keyword arguments are passed to :class:`RstConfig`.
    """
    try:
        strategy, bootstrap = _constants.variants[name]
    except KeyError:
        raise ConfigException('{0} is not a valid variant, expected one of '
                              '{1}'.format(name,
                                           list(_constants.variants.keys())))
    kwargs['split_strategy'] = strategy
    kwargs['bootstrap'] = bootstrap
    return RstConfig(**kwargs)


def alt_label(name):
    """Label the published variant listing uses for model `name`."""
    try:
        return _constants.published_labels[name]
    except KeyError:
        raise ConfigException('unknown model %r' % name)


def tree_seed(master_seed, index):
    """Stable per-tree seed derived from (master_seed, tree index)."""
    ss = numpy.random.SeedSequence([int(master_seed), int(index)])
    return int(ss.generate_state(1)[0])


def sample_theta(rng, config, length):
    """Draw (order, num_basis) for one tree.

    The order is drawn first, then the basis count, each uniform over its
    inclusive range.  The count is capped at the series length `length`.
    """
    order = int(rng.integers(config.o_min, config.o_max + 1))
    drawn = int(rng.integers(config.k_min, config.k_max + 1))
    k = effective_num_basis(order, drawn, length)
    return ThetaDraw(order, k, drawn, k != drawn)


class _RepresentationCache(object):
    """Design matrices and fitted coefficients shared between members
    whose bases are identical."""
    def __init__(self, series):
        self.series = series
        self.lock = threading.Lock()
        self._designs = {}
        self._coeffs = {}

    def design(self, order, num_basis):
        key = (order, num_basis)
        with self.lock:
            if key not in self._designs:
                self._designs[key] = design_matrix(make_basis(order,
                                                              num_basis),
                                                   self.series.shape[1])
            return self._designs[key]

    def coefficients(self, design):
        key = design.basis.key
        with self.lock:
            cached = self._coeffs.get(key)
        if cached is None:
            cached = design.solve(self.series)
            with self.lock:
                cached = self._coeffs.setdefault(key, cached)
        return cached


class EnsembleMember(object):
    """One tree of an ensemble and the representation it was trained on.

    `theta` and `design` are None for raw-value forest members.
    """
    def __init__(self, tree, seed, theta=None, design=None):
        self.tree = tree
        self.seed = seed
        self.theta = theta
        self.design = design

    @property
    def basis(self):
        return None if self.design is None else self.design.basis

    def features(self, series):
        """Representation of an N x P series matrix seen by the tree."""
        if self.design is None:
            return series
        return self.design.solve(series)

    def __repr__(self):
        msg = ('<steelscript.splinetrees.core.ensemble.EnsembleMember('
               'seed={0} theta={1} nodes={2})>')
        return msg.format(self.seed, self.theta, self.tree.node_count)


class _VotingForest(object):
    """Majority-vote ensemble of :class:`EnsembleMember` objects."""
    def __init__(self, members, config, num_classes, series_length):
        self.members = list(members)
        self.config = config
        self.num_classes = int(num_classes)
        self.series_length = int(series_length)

    def __len__(self):
        return len(self.members)

    def _check_series(self, series):
        series = numpy.asarray(series, dtype=float)
        if series.ndim == 1:
            series = series[None, :]
        if series.ndim != 2 or series.shape[1] != self.series_length:
            raise InvalidInputException(
                'series of shape {0} do not match ensemble trained on '
                'length {1}'.format(series.shape, self.series_length))
        return series

    def member_predictions(self, series, n_members=None):
        """T x N matrix with every member's class id for every series.

        Fits for members sharing an identical basis are computed once.
        """
        series = self._check_series(series)
        members = self.members[:n_members]
        cache = {}
        out = numpy.empty((len(members), series.shape[0]), dtype=int)
        for i, m in enumerate(members):
            key = None if m.basis is None else m.basis
            if key not in cache:
                cache[key] = m.features(series)
            out[i] = m.tree.predict(cache[key])
        return out

    def votes(self, series, n_members=None):
        """Z x N vote counts; row z - 1 holds the votes for class z."""
        return _tally(self.member_predictions(series, n_members),
                      self.num_classes)

    def predict(self, series, n_members=None):
        return vote(self.member_predictions(series, n_members),
                    self.num_classes)

    def __repr__(self):
        msg = '<{0}.{1}(members={2} classes={3} length={4})>'
        return msg.format(self.__module__, self.__class__.__name__,
                          len(self), self.num_classes, self.series_length)


class RstEnsemble(_VotingForest):
    """Randomized spline tree ensemble; `config` is a :class:`RstConfig`."""

    def theta_summary(self):
        """Range of the drawn orders, of the drawn and the effective
        num_basis values, and the number of clamped draws."""
        orders = [m.theta.order for m in self.members]
        counts = [m.theta.num_basis for m in self.members]
        drawn = [m.theta.drawn_num_basis for m in self.members]
        return {'order_min': min(orders), 'order_max': max(orders),
                'nbasis_min': min(counts), 'nbasis_max': max(counts),
                'drawn_nbasis_min': min(drawn),
                'drawn_nbasis_max': max(drawn),
                'clamped': sum(1 for m in self.members if m.theta.clamped)}


class RandomForest(_VotingForest):
    """Raw-value random forest; `config` is a :class:`RfConfig`."""

    def theta_summary(self):
        return {'order_min': None, 'order_max': None, 'nbasis_min': None,
                'nbasis_max': None, 'drawn_nbasis_min': None,
                'drawn_nbasis_max': None, 'clamped': 0}


def _tally(predictions, num_classes):
    predictions = numpy.atleast_2d(predictions)
    return numpy.stack([(predictions == z).sum(axis=0)
                        for z in range(1, num_classes + 1)])


def vote(predictions, num_classes, n_members=None):
    """Majority vote over the first `n_members` rows of a T x N matrix of
    member predictions; ties go to the lowest class id."""
    predictions = numpy.atleast_2d(predictions)[:n_members]
    return numpy.argmax(_tally(predictions, num_classes), axis=0) + 1


def accuracy(predicted, truth):
    predicted = numpy.asarray(predicted)
    truth = numpy.asarray(truth)
    if predicted.shape != truth.shape or truth.size == 0:
        raise InvalidInputException('cannot score {0} predictions against '
                                    '{1} labels'.format(predicted.shape,
                                                        truth.shape))
    return float(numpy.mean(predicted == truth))


def _check_train(train):
    if train is None or len(train) == 0:
        raise InvalidInputException('cannot fit on an empty training set')


def _map(fn, items, workers):
    if workers is None or workers <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def fit_rst(train, config, workers=1):
    """Fit a randomized spline tree ensemble.

    :param train: training :class:`Dataset`
    :param config: :class:`RstConfig`
    :param int workers: trees grown concurrently; does not change results
    :returns: :class:`RstEnsemble`
    """
    _check_train(train)
    series = train.series
    labels = train.labels
    n, length = series.shape
    cache = _RepresentationCache(series)

    def build(index):
        seed = tree_seed(config.master_seed, index)
        rng = numpy.random.default_rng(seed)

        theta = sample_theta(rng, config, length)
        if theta.clamped:
            logger.debug('Tree %d: num_basis %d clamped to %d'
                         % (index, theta.drawn_num_basis, theta.num_basis))
        design = cache.design(theta.order, theta.num_basis)
        coeffs = cache.coefficients(design)

        if config.bootstrap:
            rows = rng.integers(0, n, size=n)
            coeffs = coeffs[rows]
            tree_labels = labels[rows]
        else:
            tree_labels = labels

        tree = grow_tree(coeffs, tree_labels, config.tree_params, seed=seed,
                         num_classes=train.num_classes, rng=rng)
        return EnsembleMember(tree, seed, theta=theta, design=design)

    members = _map(build, range(config.n_estimators), workers)
    ensemble = RstEnsemble(members, config, train.num_classes, length)
    logger.info('Fitted %d spline trees on %s (%d series, length %d)'
                % (len(members), train.name, n, length))
    return ensemble


def fit_rf_baseline(train, n_estimators=_constants.N_ESTIMATORS, mtry=None,
                    seed=0, bootstrap=True, tree_params=None, workers=1):
    """Fit a random forest on the raw series values.

    Rows are bootstrapped per tree and every node considers `mtry`
    features drawn without replacement (default ceil(sqrt(P))); splits are
    exhaustive.

    :returns: :class:`RandomForest`
    """
    _check_train(train)
    config = RfConfig(n_estimators=n_estimators, max_features=mtry,
                      bootstrap=bootstrap, tree_params=tree_params,
                      master_seed=seed)
    series = train.series
    labels = train.labels
    n, length = series.shape
    params = config.tree_params.replace(max_features=config.mtry(length))

    def build(index):
        tseed = tree_seed(config.master_seed, index)
        rng = numpy.random.default_rng(tseed)
        if config.bootstrap:
            rows = rng.integers(0, n, size=n)
        else:
            rows = numpy.arange(n)
        tree = grow_tree(series[rows], labels[rows], params, seed=tseed,
                         num_classes=train.num_classes, rng=rng)
        return EnsembleMember(tree, tseed)

    members = _map(build, range(config.n_estimators), workers)
    forest = RandomForest(members, config, train.num_classes, length)
    logger.info('Fitted %d raw-value trees on %s (mtry=%d)'
                % (len(members), train.name, params.max_features))
    return forest


def predict(ensemble, series):
    """Class id for a single series of length P."""
    series = numpy.asarray(series, dtype=float)
    if series.ndim != 1:
        raise InvalidInputException('predict expects a single series')
    return int(ensemble.predict(series)[0])


def member_predictions(ensemble, test, n_members=None):
    series = test.series if hasattr(test, 'series') else test
    return ensemble.member_predictions(series, n_members)


def predict_batch(ensemble, test, n_members=None):
    """Predict every series of `test`.

    :param n_members: vote with the first `n_members` members only
    :returns: (labels, accuracy)
    """
    if test is None or len(test) == 0:
        raise InvalidInputException('cannot predict an empty test set')
    labels = ensemble.predict(test.series, n_members)
    return labels, accuracy(labels, test.labels)
