# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.

"""
The bench module runs classification experiments over a grid of
datasets, models and seeds and writes the results as CSV and JSON.

An experiment is described by an :class:`ExperimentConfig`, usually read
from a YAML file::

    datasets:
      - synthetic: {n_per_class: 50, length: 64, noise_sd: 0.3, seed: 0}
      - name: ItalyPowerDemand
        ucr_root: /data/UCRArchive_2018
      - name: Fish
        train: /data/Fish_TRAIN.tsv
        test: /data/Fish_TEST.tsv
    models: [RF, RST-B, RST-R, RST-BB, RST-RB]
    n_estimators: 100
    order_range: [3, 9]
    nbasis_range: [11, 50]
    seeds: [0, 1, 2, 3, 4]
    output_dir: results

Every (dataset, model, seed) cell is independent.  A failing cell is
logged and reported with its ``error`` column set; the remaining cells
still run.  Cells may run concurrently, records are always merged in
(dataset, model, seed, T) order.

Output files, all UTF-8 comma separated with a header row:

``records.csv``
    one :data:`RunRecord` per row
``table.csv``
    mean accuracy over seeds, datasets as rows and models as columns
``reference.csv``
    published accuracies and dataset details, ``source=published``
``sweep.csv``
    one :data:`SweepRecord` per (dataset, model, seed, T)
``timing.csv``
    one :data:`TimingRecord` per (dataset, model, T)
``diversity.csv``
    one :data:`DiversityRow` per observation plus a ``mean`` row
``run.json``
    the configuration, the outputs written and an environment stamp
"""

import os
import json
import time
import logging
import platform
import datetime
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor

import numpy
import pandas
import scipy
import yaml
import pkg_resources

from steelscript.splinetrees.core import _constants
from steelscript.splinetrees.core._exceptions import (ConfigException,
                                                      DatasetException)
from steelscript.splinetrees.core._types import TreeParams
from steelscript.splinetrees.core.dataset import (Split, load_ucr,
                                                  load_ucr_pair,
                                                  synth_dataset,
                                                  dataset_summary)
from steelscript.splinetrees.core.ensemble import (RstConfig, fit_rst,
                                                   fit_rf_baseline,
                                                   variant_config, alt_label,
                                                   predict_batch,
                                                   member_predictions, vote,
                                                   accuracy)
from steelscript.splinetrees.core.diversity import ensemble_diversity_report
from steelscript.splinetrees.core.serialize import save_ensemble

__all__ = ['ExperimentConfig', 'DatasetSpec', 'RunRecord', 'SweepRecord',
           'TimingRecord', 'DiversityRow', 'fit_model', 'run_experiment',
           'sweep_estimators', 'time_fit', 'diversity_report_cmd',
           'accuracy_table', 'records_frame', 'reference_frame',
           'median_seconds', 'monotone_flags', 'environment_stamp']

logger = logging.getLogger(__name__)


RunRecord = namedtuple('RunRecord',
                       ['dataset', 'model', 'published_label', 'seed',
                        'n_estimators', 'accuracy', 'fit_seconds',
                        'predict_seconds', 'order_min', 'order_max',
                        'nbasis_min', 'nbasis_max', 'drawn_nbasis_min',
                        'drawn_nbasis_max', 'clamped',
                        'diversity_D', 'diversity_QD', 'diversity_VF',
                        'error'])

SweepRecord = namedtuple('SweepRecord',
                         ['dataset', 'model', 'published_label', 'seed',
                          'n_estimators', 'accuracy', 'error'])

TimingRecord = namedtuple('TimingRecord',
                          ['dataset', 'model', 'published_label', 'seed',
                           'n_estimators', 'repeats', 'median_seconds',
                           'min_seconds', 'max_seconds', 'monotone',
                           'error'])

DiversityRow = namedtuple('DiversityRow',
                          ['dataset', 'model', 'published_label', 'seed',
                           'split', 'observation', 'D', 'Q_D', 'V_F',
                           'error'])

# One dataset after loading; error is set when loading failed
_Loaded = namedtuple('_Loaded', ['name', 'train', 'test', 'error'])


class DatasetSpec(object):
    """Where the train and test splits of one dataset come from.

    Exactly one source is allowed: explicit ``train`` and ``test`` paths,
    a ``ucr_root`` archive directory holding ``<name>/<name>_TRAIN.tsv``
    and ``_TEST``, or a ``synthetic`` parameter mapping.
    """
    _keys = ('name', 'train', 'test', 'ucr_root', 'synthetic')

    def __init__(self, name=None, train=None, test=None, ucr_root=None,
                 synthetic=None):
        self.name = name
        self.train = train
        self.test = test
        self.ucr_root = ucr_root
        self.synthetic = None
        if synthetic is not None:
            if not isinstance(synthetic, dict):
                raise ConfigException('synthetic must be a mapping, got %r'
                                      % (synthetic,))
            unknown = set(synthetic) - set(_constants.SYNTHETIC)
            if unknown:
                raise ConfigException('unknown synthetic keys %s'
                                      % sorted(unknown))
            self.synthetic = dict(_constants.SYNTHETIC)
            self.synthetic.update(synthetic)
            self.name = self.name or 'synthetic'

        sources = [self.synthetic is not None, self.ucr_root is not None,
                   self.train is not None or self.test is not None]
        if sum(sources) != 1:
            raise ConfigException('dataset %r needs exactly one of '
                                  'train/test, ucr_root or synthetic'
                                  % self.name)
        if sources[2] and (self.train is None or self.test is None):
            raise ConfigException('dataset %r needs both train and test '
                                  'paths' % self.name)
        if sources[1] and not self.name:
            raise ConfigException('an archive dataset needs a name')

    @classmethod
    def parse(cls, entry, ucr_root=None):
        """Build from a config entry.

        A bare string, or a mapping holding only ``name``, names a dataset
        under the experiment's `ucr_root`.
        """
        if isinstance(entry, str):
            entry = {'name': entry}
        if not isinstance(entry, dict):
            raise ConfigException('invalid dataset entry %r' % (entry,))
        unknown = set(entry) - set(cls._keys)
        if unknown:
            raise ConfigException('unknown dataset keys %s' % sorted(unknown))
        entry = dict(entry)
        if not set(entry) & set(('train', 'test', 'synthetic', 'ucr_root')):
            if ucr_root is None:
                raise ConfigException('dataset %r given by name only, but '
                                      'no ucr_root is configured'
                                      % entry.get('name'))
            entry['ucr_root'] = ucr_root
        return cls(**entry)

    def load(self):
        """Return the (train, test) :class:`Dataset` pair."""
        if self.synthetic is not None:
            s = self.synthetic
            train, test = synth_dataset(s['n_per_class'], s['length'],
                                        s['noise_sd'], seed=s['seed'])
            train.name = test.name = self.name
        elif self.ucr_root is not None:
            train, test = load_ucr_pair(self.ucr_root, self.name)
        else:
            train = load_ucr(self.train, name=self.name, split=Split.TRAIN)
            test = load_ucr(self.test, label_map=train.label_map,
                            name=train.name, split=Split.TEST)
            self.name = train.name

        if test.length != train.length:
            raise DatasetException('{0}: train length {1} differs from test '
                                   'length {2}'.format(train.name,
                                                       train.length,
                                                       test.length))
        for ds in (train, test):
            logger.debug('%s' % (dataset_summary(ds),))
        return train, test

    def to_dict(self):
        return dict((k, getattr(self, k)) for k in self._keys
                    if getattr(self, k) is not None)

    def __repr__(self):
        return ('<steelscript.splinetrees.core.bench.DatasetSpec({0})>'
                .format(self.to_dict()))


def _int_list(name, values):
    if values is None:
        return None
    if isinstance(values, (int, str)):
        values = [values]
    try:
        return [int(v) for v in values]
    except (TypeError, ValueError):
        raise ConfigException('%s must be a list of integers, got %r'
                              % (name, values))


class ExperimentConfig(object):
    """Everything an experiment needs besides wall-clock time.

    Keyword arguments match the YAML keys; missing ones take the library
    defaults.
    """
    _keys = ('datasets', 'models', 'n_estimators', 'order_range',
             'nbasis_range', 'min_samples_split', 'max_depth', 'mtry',
             'seeds', 'sweep', 'timing', 'repeats', 'grid_size',
             'output_dir', 'workers', 'diversity_split', 'record_diversity',
             'ucr_root')

    def __init__(self, datasets=None, models=None,
                 n_estimators=_constants.N_ESTIMATORS,
                 order_range=_constants.ORDER_RANGE,
                 nbasis_range=_constants.NBASIS_RANGE,
                 min_samples_split=_constants.MIN_SAMPLES_SPLIT,
                 max_depth=None, mtry=None, seeds=None, sweep=None,
                 timing=None, repeats=_constants.TIMING_REPEATS,
                 grid_size=_constants.DIVERSITY_GRID_SIZE, output_dir='.',
                 workers=1, diversity_split=Split.TEST,
                 record_diversity=False, ucr_root=None):
        self.ucr_root = ucr_root
        if datasets is None:
            datasets = [{'synthetic': {}}]
        self.datasets = [d if isinstance(d, DatasetSpec)
                         else DatasetSpec.parse(d, ucr_root)
                         for d in datasets]
        self.models = list(_constants.models if models is None else models)
        self.n_estimators = int(n_estimators)
        self.order_range = tuple(_int_list('order_range', order_range))
        self.nbasis_range = tuple(_int_list('nbasis_range', nbasis_range))
        self.min_samples_split = int(min_samples_split)
        self.max_depth = None if max_depth is None else int(max_depth)
        self.mtry = None if mtry is None else int(mtry)
        self.seeds = _int_list('seeds', [0] if seeds is None else seeds)
        self.sweep = _int_list('sweep', sweep or _constants.SWEEP_GRID)
        self.timing = _int_list('timing', timing or _constants.TIMING_GRID)
        self.repeats = int(repeats)
        self.grid_size = int(grid_size)
        self.output_dir = output_dir
        self.workers = int(workers)
        self.diversity_split = diversity_split
        self.record_diversity = bool(record_diversity)
        self.validate()

    @classmethod
    def from_dict(cls, d):
        if d is None:
            d = {}
        if not isinstance(d, dict):
            raise ConfigException('experiment config must be a mapping')
        unknown = set(d) - set(cls._keys)
        if unknown:
            raise ConfigException('unknown config keys %s' % sorted(unknown))
        return cls(**d)

    @classmethod
    def from_yaml(cls, path):
        if not os.path.exists(path):
            raise ConfigException('config file %s not found' % path)
        with open(path, encoding='utf-8') as f:
            try:
                d = yaml.safe_load(f)
            except yaml.YAMLError as e:
                raise ConfigException('cannot parse %s: %s' % (path, e))
        logger.debug('Loaded experiment config from %s' % path)
        return cls.from_dict(d)

    def validate(self):
        if not self.datasets:
            raise ConfigException('at least one dataset is required')
        names = [d.name for d in self.datasets if d.name]
        repeated = sorted(set(n for n in names if names.count(n) > 1))
        if repeated:
            raise ConfigException('duplicate dataset names %s, give each '
                                  'entry a distinct name' % repeated)
        if not self.models:
            raise ConfigException('at least one model is required')
        unknown = [m for m in self.models if m not in _constants.models]
        if unknown:
            raise ConfigException('unknown models {0}, expected a subset of '
                                  '{1}'.format(unknown, _constants.models))
        if len(set(self.models)) != len(self.models):
            raise ConfigException('duplicate models in %s' % self.models)
        if not self.seeds:
            raise ConfigException('at least one seed is required')
        if any(s < 0 for s in self.seeds):
            raise ConfigException('seeds must be non-negative')

        for name in ('sweep', 'timing'):
            grid = getattr(self, name)
            if not grid or any(t < 1 for t in grid):
                raise ConfigException('%s values must be positive, got %s'
                                      % (name, grid))
            if grid != sorted(set(grid)):
                raise ConfigException('%s values must be sorted ascending '
                                      'without repeats, got %s'
                                      % (name, grid))

        if self.repeats < 1:
            raise ConfigException('repeats must be >= 1')
        if self.grid_size < 2:
            raise ConfigException('grid_size must be >= 2')
        if self.workers < 1:
            raise ConfigException('workers must be >= 1')
        if self.diversity_split not in (Split.TRAIN, Split.TEST):
            raise ConfigException('diversity_split must be train or test, '
                                  'got %r' % self.diversity_split)

        # range and tree parameter checks
        RstConfig(n_estimators=self.n_estimators,
                  order_range=self.order_range,
                  nbasis_range=self.nbasis_range,
                  tree_params=self.tree_params())
        if self.mtry is not None and self.mtry < 1:
            raise ConfigException('mtry must be >= 1')

    def tree_params(self):
        return TreeParams(min_samples_split=self.min_samples_split,
                          max_depth=self.max_depth)

    def to_dict(self):
        d = dict((k, getattr(self, k)) for k in self._keys)
        d['datasets'] = [spec.to_dict() for spec in self.datasets]
        d['order_range'] = list(self.order_range)
        d['nbasis_range'] = list(self.nbasis_range)
        return d

    def replace(self, **kwargs):
        """Copy with `kwargs` applied; None values leave a key unchanged."""
        d = self.to_dict()
        d['datasets'] = list(self.datasets)
        d.update((k, v) for k, v in kwargs.items() if v is not None)
        return ExperimentConfig.from_dict(d)

    def __repr__(self):
        return ('<steelscript.splinetrees.core.bench.ExperimentConfig('
                'datasets={0} models={1} seeds={2} T={3})>'
                .format([d.name for d in self.datasets], self.models,
                        self.seeds, self.n_estimators))


def fit_model(model, train, config, seed, n_estimators=None, workers=1):
    """Fit `model` ('RF' or an RST variant name) on `train`."""
    n_estimators = n_estimators or config.n_estimators
    if model == 'RF':
        return fit_rf_baseline(train, n_estimators=n_estimators,
                               mtry=config.mtry, seed=seed,
                               tree_params=config.tree_params(),
                               workers=workers)
    rst = variant_config(model, n_estimators=n_estimators,
                         order_range=config.order_range,
                         nbasis_range=config.nbasis_range,
                         tree_params=config.tree_params(),
                         master_seed=seed)
    return fit_rst(train, rst, workers=workers)


def _describe(e):
    return '%s: %s' % (e.__class__.__name__, e)


def _load_datasets(config):
    loaded = []
    for spec in config.datasets:
        try:
            train, test = spec.load()
            name = spec.name or train.name
            if name in [d.name for d in loaded]:
                raise ConfigException('dataset name %s is used twice' % name)
            loaded.append(_Loaded(name, train, test, None))
        except Exception as e:
            logger.warning('Failed to load dataset %s: %s'
                           % (spec.name, _describe(e)))
            loaded.append(_Loaded(spec.name, None, None, _describe(e)))
    return loaded


def _cells(config, loaded, models=None):
    return [(data, model, seed)
            for data in loaded
            for model in (models or config.models)
            for seed in config.seeds]


def _execute(fn, cells, workers):
    # fn(cell, fit_workers); workers go to cells when there are several,
    # otherwise to the trees of the single fit
    if workers > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda cell: fn(cell, 1), cells))
    return [fn(cell, workers) for cell in cells]


def _split_of(data, which):
    return data.train if which == Split.TRAIN else data.test


def _ensure_dir(path):
    if path and not os.path.isdir(path):
        os.makedirs(path)
    return path


def _write_csv(frame, output_dir, filename):
    path = os.path.join(_ensure_dir(output_dir), filename)
    frame.to_csv(path, index=False, encoding='utf-8')
    logger.info('Wrote %d rows to %s' % (len(frame), path))
    return path


def _package_version():
    try:
        return pkg_resources.get_distribution(
            'steelscript.splinetrees').version
    except pkg_resources.DistributionNotFound:
        return 'unknown'


def environment_stamp():
    """Versions and host details recorded next to every result set."""
    return {'python': platform.python_version(),
            'platform': platform.platform(),
            'splinetrees': _package_version(),
            'numpy': numpy.__version__,
            'scipy': scipy.__version__,
            'pandas': pandas.__version__,
            'timestamp': datetime.datetime.now(
                datetime.timezone.utc).isoformat()}


def _write_run_json(config, command, outputs):
    path = os.path.join(_ensure_dir(config.output_dir), 'run.json')
    doc = {'command': command,
           'config': config.to_dict(),
           'outputs': [os.path.basename(p) for p in outputs],
           'environment': environment_stamp()}
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(doc, f, indent=2, sort_keys=True)
    logger.info('Wrote %s' % path)
    return path


def _model_filename(dataset, model, seed):
    return '{0}_{1}_seed{2}.json'.format(dataset, model, seed)


def _run_cell(config, cell, workers, models_dir=None):
    data, model, seed = cell
    label = alt_label(model)
    record = RunRecord(**dict.fromkeys(RunRecord._fields))._replace(
        dataset=data.name, model=model, published_label=label, seed=seed,
        n_estimators=config.n_estimators, error=data.error)
    if data.error:
        return record

    try:
        start = time.perf_counter()
        ensemble = fit_model(model, data.train, config, seed, workers=workers)
        fit_seconds = time.perf_counter() - start

        start = time.perf_counter()
        _, acc = predict_batch(ensemble, data.test)
        predict_seconds = time.perf_counter() - start

        theta = ensemble.theta_summary()
        diversity = (None, None, None)
        if config.record_diversity and model != 'RF':
            report = ensemble_diversity_report(
                ensemble, _split_of(data, config.diversity_split),
                grid_size=config.grid_size)
            diversity = (report.pairwise_D, report.quadratic_QD,
                         report.functional_variance_VF)

        if models_dir:
            save_ensemble(ensemble, os.path.join(
                models_dir, _model_filename(data.name, model, seed)))
    except Exception as e:
        logger.warning('Run %s/%s/seed %d failed: %s'
                       % (data.name, model, seed, _describe(e)))
        return record._replace(error=_describe(e))

    logger.info('Run %s/%s/seed %d: accuracy %.4f, fit %.3fs'
                % (data.name, model, seed, acc, fit_seconds))
    return record._replace(n_estimators=len(ensemble), accuracy=acc,
                           fit_seconds=fit_seconds,
                           predict_seconds=predict_seconds,
                           diversity_D=diversity[0],
                           diversity_QD=diversity[1],
                           diversity_VF=diversity[2], **theta)


def records_frame(records, fields=RunRecord._fields):
    return pandas.DataFrame.from_records(list(records), columns=list(fields))


def accuracy_table(records, models=None, datasets=None):
    """Mean accuracy over seeds, one row per dataset, one column per model.

    Failed records are left out.
    """
    frame = records_frame(records)
    frame = frame[frame['error'].isnull()].copy()
    if frame.empty:
        return pandas.DataFrame(columns=['dataset'] + list(models or []))

    frame['accuracy'] = frame['accuracy'].astype(float)
    table = frame.pivot_table(index='dataset', columns='model',
                              values='accuracy', aggfunc='mean')
    if models:
        table = table.reindex(columns=[m for m in models
                                       if m in table.columns])
    if datasets:
        table = table.reindex([d for d in dict.fromkeys(datasets)
                               if d in table.index])
    table.columns.name = None
    return table.reset_index()


def reference_frame():
    """Published accuracies and dataset details, one row per cell.

    ``model`` names the configuration in this package's naming and
    ``published_label`` the column it was listed under.
    """
    rows = []
    for dataset in sorted(_constants.reference_accuracy):
        details = _constants.reference_datasets[dataset]
        values = _constants.reference_accuracy[dataset]
        for column, value in zip(_constants.reference_columns, values):
            model = _constants.published_labels.get(column, column)
            rows.append((dataset, model, column, value) + details +
                        ('published',))
    return pandas.DataFrame.from_records(
        rows, columns=['dataset', 'model', 'published_label', 'accuracy',
                       'train_size', 'test_size', 'length', 'classes',
                       'source'])


def run_experiment(config, save_models=False):
    """Fit and score every (dataset, model, seed) cell of `config`.

    Writes records.csv, table.csv, reference.csv and run.json to
    ``config.output_dir``; with `save_models` every fitted ensemble is
    also written under ``models/``.

    :returns: list of :data:`RunRecord`
    """
    loaded = _load_datasets(config)
    models_dir = None
    if save_models:
        models_dir = _ensure_dir(os.path.join(config.output_dir, 'models'))

    records = _execute(
        lambda cell, workers: _run_cell(config, cell, workers, models_dir),
        _cells(config, loaded), config.workers)

    outputs = [
        _write_csv(records_frame(records), config.output_dir, 'records.csv'),
        _write_csv(accuracy_table(records, config.models,
                                  [d.name for d in loaded]),
                   config.output_dir, 'table.csv'),
        _write_csv(reference_frame(), config.output_dir, 'reference.csv'),
    ]
    _write_run_json(config, 'run', outputs)

    failed = sum(1 for r in records if r.error)
    if failed:
        logger.warning('%d of %d runs failed' % (failed, len(records)))
    return records


def _check_grid(grid):
    grid = [int(t) for t in grid]
    if not grid:
        raise ConfigException('the grid of ensemble sizes is empty')
    if any(t < 1 for t in grid):
        raise ConfigException('ensemble sizes must be >= 1, got %s' % grid)
    return sorted(set(grid))


def _sweep_cell(config, cell, workers, grid):
    data, model, seed = cell
    label = alt_label(model)
    if data.error:
        return [SweepRecord(data.name, model, label, seed, t, None,
                            data.error) for t in grid]
    try:
        ensemble = fit_model(model, data.train, config, seed,
                             n_estimators=grid[-1], workers=workers)
        predictions = member_predictions(ensemble, data.test)
        return [SweepRecord(data.name, model, label, seed, t,
                            accuracy(vote(predictions, ensemble.num_classes,
                                          t), data.test.labels), None)
                for t in grid]
    except Exception as e:
        logger.warning('Sweep %s/%s/seed %d failed: %s'
                       % (data.name, model, seed, _describe(e)))
        return [SweepRecord(data.name, model, label, seed, t, None,
                            _describe(e)) for t in grid]


def sweep_estimators(config, grid=None):
    """Accuracy as a function of ensemble size.

    One ensemble of max(`grid`) trees is fitted per (dataset, model, seed);
    the accuracy at T is the vote of its first T members, which matches a
    fresh T-tree fit with the same seed.

    :returns: list of :data:`SweepRecord`, written to sweep.csv
    """
    grid = _check_grid(config.sweep if grid is None else grid)
    loaded = _load_datasets(config)

    nested = _execute(lambda cell, workers: _sweep_cell(config, cell,
                                                        workers, grid),
                      _cells(config, loaded), config.workers)
    records = [r for rows in nested for r in rows]

    outputs = [_write_csv(records_frame(records, SweepRecord._fields),
                          config.output_dir, 'sweep.csv')]
    _write_run_json(config, 'sweep', outputs)
    return records


def median_seconds(times):
    """Median of repeated wall-clock measurements."""
    if len(times) == 0:
        raise ConfigException('no timing measurements')
    return float(numpy.median(times))


def monotone_flags(medians, band=_constants.TIMING_NOISE_BAND):
    """Whether each median is at least the largest earlier median less
    the relative noise `band`."""
    flags = []
    peak = 0.0
    for m in medians:
        flags.append(m >= peak * (1.0 - band))
        peak = max(peak, m)
    return flags


def _time_once(model, train, config, seed, n_estimators):
    start = time.perf_counter()
    fit_model(model, train, config, seed, n_estimators=n_estimators,
              workers=1)
    return time.perf_counter() - start


def time_fit(config, grid=None, repeats=None):
    """Median single-worker fit time per (dataset, model, T).

    Only fitting is timed: the basis and coefficient stage plus tree
    growth.  Data loading and prediction are excluded.  Cells run one at a
    time with the first configured seed.

    :returns: list of :data:`TimingRecord`, written to timing.csv
    """
    grid = _check_grid(config.timing if grid is None else grid)
    repeats = int(repeats or config.repeats)
    if repeats < 1:
        raise ConfigException('repeats must be >= 1')
    seed = config.seeds[0]

    records = []
    for data in _load_datasets(config):
        for model in config.models:
            label = alt_label(model)
            if data.error:
                records.extend(TimingRecord(data.name, model, label, seed, t,
                                            repeats, None, None, None, None,
                                            data.error) for t in grid)
                continue
            try:
                rows = []
                for t in grid:
                    times = [_time_once(model, data.train, config, seed, t)
                             for _ in range(repeats)]
                    rows.append((t, median_seconds(times), min(times),
                                 max(times)))
            except Exception as e:
                logger.warning('Timing %s/%s failed: %s'
                               % (data.name, model, _describe(e)))
                records.extend(TimingRecord(data.name, model, label, seed, t,
                                            repeats, None, None, None, None,
                                            _describe(e)) for t in grid)
                continue

            flags = monotone_flags([r[1] for r in rows])
            if not all(flags):
                logger.warning('Fit time of %s/%s is not increasing in T '
                               'within the noise band: %s'
                               % (data.name, model,
                                  ['%d:%.4fs' % (r[0], r[1]) for r in rows]))
            records.extend(TimingRecord(data.name, model, label, seed, t,
                                        repeats, med, lo, hi, flag, None)
                           for (t, med, lo, hi), flag in zip(rows, flags))

    outputs = [_write_csv(records_frame(records, TimingRecord._fields),
                          config.output_dir, 'timing.csv')]
    _write_run_json(config, 'time', outputs)
    return records


def _diversity_cell(config, cell, workers):
    data, model, seed = cell
    label = alt_label(model)
    split = config.diversity_split
    if data.error:
        return [DiversityRow(data.name, model, label, seed, split, 'mean',
                             None, None, None, data.error)]
    try:
        ensemble = fit_model(model, data.train, config, seed,
                             workers=workers)
        report = ensemble_diversity_report(ensemble,
                                           _split_of(data, split),
                                           grid_size=config.grid_size)
    except Exception as e:
        logger.warning('Diversity %s/%s failed: %s'
                       % (data.name, model, _describe(e)))
        return [DiversityRow(data.name, model, label, seed, split, 'mean',
                             None, None, None, _describe(e))]

    rows = [DiversityRow(data.name, model, label, seed, split, i, d, q, v,
                         None)
            for i, d, q, v in report.rows()]
    rows.append(DiversityRow(data.name, model, label, seed, split, 'mean',
                             report.pairwise_D, report.quadratic_QD,
                             report.functional_variance_VF, None))
    return rows


def diversity_report_cmd(config):
    """Representation diversity of every (dataset, RST model) pair.

    Ensembles are fitted with the first configured seed and measured on
    ``config.diversity_split``.  The raw-value forest has no basis
    representation and is skipped.

    :returns: list of :data:`DiversityRow`, written to diversity.csv
    """
    models = [m for m in config.models if m != 'RF']
    if len(models) != len(config.models):
        logger.info('Skipping RF, it has no functional representation')
    if not models:
        raise ConfigException('diversity needs at least one RST model')

    loaded = _load_datasets(config)
    cells = [(data, model, config.seeds[0])
             for data in loaded for model in models]
    nested = _execute(lambda cell, workers: _diversity_cell(config, cell,
                                                            workers),
                      cells, config.workers)
    rows = [r for group in nested for r in group]

    outputs = [_write_csv(records_frame(rows, DiversityRow._fields),
                          config.output_dir, 'diversity.csv')]
    _write_run_json(config, 'diversity', outputs)
    return rows
