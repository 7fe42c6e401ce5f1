# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.

"""
Ensemble artifacts.

A fitted ensemble is written as a single JSON document::

    {
      "format": "splinetrees-ensemble",
      "version": 1,
      "kind": "rst" | "rf",
      "config": {...},                 # RstConfig / RfConfig fields
      "num_classes": Z,
      "series_length": P,
      "members": [
        {
          "seed": 123,
          "theta": {"order": o, "num_basis": K, "drawn_num_basis": K0,
                    "clamped": false},                         # rst only
          "knots": [...],                                      # rst only
          "tree": {"feature": [...], "threshold": [...],
                   "left": [...], "right": [...], "counts": [[...]],
                   "num_features": K, "params": {...}}
        }, ...
      ]
    }

Design matrices are rebuilt from the knots and the series length on
load, so predictions of a reloaded ensemble are identical.
"""

import json
import logging

from steelscript.splinetrees.core import _constants
from steelscript.splinetrees.core._exceptions import SerializationException
from steelscript.splinetrees.core._types import ThetaDraw, TreeParams
from steelscript.splinetrees.core.bspline import BSplineBasis, design_matrix
from steelscript.splinetrees.core.ensemble import (EnsembleMember, RfConfig,
                                                   RstConfig, RstEnsemble,
                                                   RandomForest)
from steelscript.splinetrees.core.tree import DecisionTree

__all__ = ['ensemble_to_dict', 'ensemble_from_dict', 'save_ensemble',
           'load_ensemble']

logger = logging.getLogger(__name__)


def _tree_to_dict(tree):
    return {'feature': tree.feature.tolist(),
            'threshold': tree.threshold.tolist(),
            'left': tree.left.tolist(),
            'right': tree.right.tolist(),
            'counts': tree.counts.tolist(),
            'num_features': tree.num_features,
            'params': tree.params.to_dict()}


def _tree_from_dict(d, seed):
    return DecisionTree(d['feature'], d['threshold'], d['left'], d['right'],
                        d['counts'], d['num_features'],
                        params=TreeParams.from_dict(d['params']), seed=seed)


def ensemble_to_dict(ensemble):
    kind = 'rst' if isinstance(ensemble, RstEnsemble) else 'rf'
    members = []
    for m in ensemble.members:
        item = {'seed': m.seed, 'tree': _tree_to_dict(m.tree)}
        if m.theta is not None:
            item['theta'] = dict(m.theta._asdict())
            item['knots'] = m.basis.knots.tolist()
        members.append(item)

    return {'format': _constants.ARTIFACT_FORMAT,
            'version': _constants.ARTIFACT_VERSION,
            'kind': kind,
            'config': ensemble.config.to_dict(),
            'num_classes': ensemble.num_classes,
            'series_length': ensemble.series_length,
            'members': members}


def ensemble_from_dict(d):
    if d.get('format') != _constants.ARTIFACT_FORMAT:
        raise SerializationException('not an ensemble artifact: format=%r'
                                     % d.get('format'))
    if d.get('version') != _constants.ARTIFACT_VERSION:
        raise SerializationException('unsupported artifact version %r, '
                                     'expected %d'
                                     % (d.get('version'),
                                        _constants.ARTIFACT_VERSION))

    try:
        length = int(d['series_length'])
        members = []
        for item in d['members']:
            tree = _tree_from_dict(item['tree'], item['seed'])
            if 'theta' in item:
                theta = ThetaDraw(**item['theta'])
                basis = BSplineBasis(theta.order, theta.num_basis,
                                     item['knots'])
                member = EnsembleMember(tree, item['seed'], theta=theta,
                                        design=design_matrix(basis, length))
            else:
                member = EnsembleMember(tree, item['seed'])
            members.append(member)

        if d['kind'] == 'rst':
            return RstEnsemble(members, RstConfig.from_dict(d['config']),
                               d['num_classes'], length)
        elif d['kind'] == 'rf':
            return RandomForest(members, RfConfig.from_dict(d['config']),
                                d['num_classes'], length)
    except (KeyError, TypeError, ValueError) as e:
        raise SerializationException('corrupt ensemble artifact: %s' % e)

    raise SerializationException('unknown ensemble kind %r' % d['kind'])


def save_ensemble(ensemble, path):
    """Write `ensemble` to `path` as a JSON artifact."""
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(ensemble_to_dict(ensemble), f)
    logger.info('Saved %d-member ensemble to %s' % (len(ensemble), path))


def load_ensemble(path):
    """Read an ensemble artifact written by :func:`save_ensemble`."""
    with open(path, encoding='utf-8') as f:
        try:
            d = json.load(f)
        except ValueError as e:
            raise SerializationException('%s is not valid JSON: %s'
                                         % (path, e))
    ensemble = ensemble_from_dict(d)
    logger.debug('Loaded %d-member ensemble from %s' % (len(ensemble), path))
    return ensemble
