# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.

"""
Representation diversity of a spline tree ensemble.

For one observation, every member of an ensemble reconstructs a curve
from its own basis.  These curves are compared on a uniform grid over
[0, 1] with the trapezoid rule:

* pairwise diversity D: mean L2 distance over all pairs of curves
* quadratic diversity Q_D: mean squared L2 distance over all pairs
* functional variance V_F: mean integrated squared deviation from the
  pointwise mean curve

The measures are diagnostics only; they never feed back into training.
"""

import logging

import numpy
import scipy.integrate

from steelscript.splinetrees.core import _constants
from steelscript.splinetrees.core._exceptions import InvalidInputException

__all__ = ['RepresentationSet', 'DiversityReport', 'l2_distance',
           'pairwise_diversity', 'quadratic_diversity',
           'functional_variance', 'ensemble_diversity_report',
           'uniform_grid']

logger = logging.getLogger(__name__)

# Upper bound on T * chunk * G floats materialized at once in reports
_CHUNK_FLOATS = 5000000


def uniform_grid(grid_size):
    grid_size = int(grid_size)
    if grid_size < 2:
        raise InvalidInputException('grid needs at least 2 points, got %d'
                                    % grid_size)
    return numpy.arange(grid_size) / float(grid_size - 1)


def _trapezoid_weights(grid):
    # exact quadrature weights of scipy.integrate.trapezoid on `grid`
    h = numpy.diff(grid)
    w = numpy.zeros(len(grid))
    w[:-1] += h / 2.0
    w[1:] += h / 2.0
    return w


class RepresentationSet(object):
    """T curves of one observation evaluated on a shared grid.

    :param values: T x G array of curve values
    :param grid: G increasing points in [0, 1]
    """
    def __init__(self, values, grid):
        self.values = numpy.atleast_2d(numpy.asarray(values, dtype=float))
        self.grid = numpy.asarray(grid, dtype=float)
        if self.grid.ndim != 1 or len(self.grid) < 2:
            raise InvalidInputException('grid needs at least 2 points')
        if self.values.shape[1] != len(self.grid):
            raise InvalidInputException(
                'curves with {0} samples do not match a grid of {1} points'
                .format(self.values.shape[1], len(self.grid)))

    @classmethod
    def from_curves(cls, curves, grid_size=_constants.DIVERSITY_GRID_SIZE):
        """Build from (coefficients, basis) pairs.

        Bases are evaluated once per distinct basis.
        """
        grid = uniform_grid(grid_size)
        evaluated = {}
        rows = []
        for coeffs, basis in curves:
            if basis not in evaluated:
                evaluated[basis] = basis.evaluate(grid)
            rows.append(evaluated[basis].dot(numpy.asarray(coeffs,
                                                           dtype=float)))
        return cls(numpy.array(rows), grid)

    def __len__(self):
        return self.values.shape[0]

    def pairwise_squared(self):
        """Integrated squared differences for all pairs s < r, in
        ``numpy.triu_indices(T, 1)`` order."""
        t = len(self)
        iu = numpy.triu_indices(t, 1)
        if t < 2:
            return numpy.zeros(0)

        w = _trapezoid_weights(self.grid)
        gram = (self.values * w).dot(self.values.T)
        diag = numpy.diag(gram)
        q = diag[:, None] + diag[None, :] - 2.0 * gram

        # identical curves compare to exactly zero
        _, group = numpy.unique(self.values, axis=0, return_inverse=True)
        group = numpy.asarray(group).ravel()
        q[group[:, None] == group[None, :]] = 0.0
        return numpy.maximum(q[iu], 0.0)

    def mean_curve(self):
        return self.values.mean(axis=0)


class DiversityReport(object):
    """Per-observation D, Q_D and V_F with their dataset means."""
    def __init__(self, pairwise, quadratic, variance, grid_size,
                 name=None):
        self.pairwise = numpy.asarray(pairwise, dtype=float)
        self.quadratic = numpy.asarray(quadratic, dtype=float)
        self.variance = numpy.asarray(variance, dtype=float)
        self.grid_size = grid_size
        self.name = name

    def __len__(self):
        return len(self.pairwise)

    @property
    def pairwise_D(self):
        return float(numpy.mean(self.pairwise))

    @property
    def quadratic_QD(self):
        return float(numpy.mean(self.quadratic))

    @property
    def functional_variance_VF(self):
        return float(numpy.mean(self.variance))

    def rows(self):
        """(observation, D, Q_D, V_F) per observation."""
        for i in range(len(self)):
            yield (i, float(self.pairwise[i]), float(self.quadratic[i]),
                   float(self.variance[i]))

    def __repr__(self):
        msg = ('<steelscript.splinetrees.core.diversity.DiversityReport('
               'n={0} D={1:.6g} Q_D={2:.6g} V_F={3:.6g})>')
        return msg.format(len(self), self.pairwise_D, self.quadratic_QD,
                          self.functional_variance_VF)


def l2_distance(a, b, grid):
    """Trapezoid approximation of (int_0^1 (a - b)^2 dt)^(1/2).

    `a` and `b` are curve values sampled on `grid`.
    """
    a = numpy.asarray(a, dtype=float)
    b = numpy.asarray(b, dtype=float)
    grid = numpy.asarray(grid, dtype=float)
    if a.shape != grid.shape or b.shape != grid.shape:
        raise InvalidInputException('curves of shape {0} and {1} are not '
                                    'sampled on a grid of {2} points'
                                    .format(a.shape, b.shape, grid.shape))
    return float(numpy.sqrt(scipy.integrate.trapezoid((a - b) ** 2, grid)))


def _require_pairs(reps):
    if len(reps) < 2:
        raise InvalidInputException('pairwise measures need at least 2 '
                                    'curves, got %d' % len(reps))


def pairwise_diversity(reps):
    """Mean pairwise L2 distance D of a :class:`RepresentationSet`."""
    _require_pairs(reps)
    return float(numpy.mean(numpy.sqrt(reps.pairwise_squared())))


def quadratic_diversity(reps):
    """Mean pairwise integrated squared difference Q_D."""
    _require_pairs(reps)
    return float(numpy.mean(reps.pairwise_squared()))


def functional_variance(reps):
    """V_F = (1/T) sum_s int (x_s - mean)^2 dt."""
    if len(reps) < 1:
        raise InvalidInputException('functional variance needs a curve')
    if numpy.all(reps.values == reps.values[0]):
        return 0.0
    dev = reps.values - reps.mean_curve()
    return float(numpy.mean(scipy.integrate.trapezoid(dev ** 2, reps.grid,
                                                      axis=1)))


def ensemble_diversity_report(ensemble, data,
                              grid_size=_constants.DIVERSITY_GRID_SIZE):
    """Diversity of the member reconstructions of every series in `data`.

    Each series is fitted with every member's design matrix, exactly as at
    prediction time, and reconstructed on a grid of `grid_size` points.

    :param ensemble: :class:`RstEnsemble`
    :param data: :class:`Dataset` with the ensemble's series length
    :returns: :class:`DiversityReport`
    """
    if data is None or len(data) == 0:
        raise InvalidInputException('cannot report diversity on an empty '
                                    'dataset')
    if any(m.design is None for m in ensemble.members):
        raise InvalidInputException('diversity is only defined for spline '
                                    'tree ensembles')
    if data.length != ensemble.series_length:
        raise InvalidInputException('series length %d does not match '
                                    'ensemble length %d'
                                    % (data.length, ensemble.series_length))

    grid = uniform_grid(grid_size)

    # every distinct basis is fitted and evaluated once
    curves = {}
    for m in ensemble.members:
        if m.basis not in curves:
            coeffs = m.design.solve(data.series)
            curves[m.basis] = (coeffs, m.basis.evaluate(grid))
    order = [m.basis for m in ensemble.members]

    t = len(order)
    n = len(data)
    pairwise = numpy.zeros(n)
    quadratic = numpy.zeros(n)
    variance = numpy.zeros(n)

    chunk = max(1, _CHUNK_FLOATS // (t * len(grid)))
    for start in range(0, n, chunk):
        stop = min(n, start + chunk)
        per_basis = dict((b, c[start:stop].dot(e.T))
                         for b, (c, e) in curves.items())
        for i in range(start, stop):
            reps = RepresentationSet(
                numpy.array([per_basis[b][i - start] for b in order]), grid)
            if t >= 2:
                q = reps.pairwise_squared()
                pairwise[i] = numpy.mean(numpy.sqrt(q))
                quadratic[i] = numpy.mean(q)
            variance[i] = functional_variance(reps)

    report = DiversityReport(pairwise, quadratic, variance, len(grid),
                             name=data.name)
    logger.info('Diversity of %d members on %s: D=%.6g Q_D=%.6g V_F=%.6g'
                % (t, data.name, report.pairwise_D, report.quadratic_QD,
                   report.functional_variance_VF))
    return report
