# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.

"""
This module contains the B-spline machinery used to turn discrete time
series into coefficient representations: clamped uniform bases evaluated
with the Cox-de Boor recursion, design matrices over the normalized sample
grid, and least-squares coefficient fits.

All values are immutable after construction and can be shared between
threads.
"""

import logging

import numpy
import scipy.linalg

from steelscript.splinetrees.core._exceptions import (InvalidBasisException,
                                                      InvalidInputException)

__all__ = ['BSplineBasis', 'DesignMatrix', 'CoefficientMatrix',
           'make_basis', 'eval_basis', 'design_matrix', 'fit_coefficients',
           'coefficients_matrix', 'reconstruct', 'effective_num_basis']

logger = logging.getLogger(__name__)


def _frozen(values):
    arr = numpy.array(values, dtype=float)
    arr.flags.writeable = False
    return arr


def _check_domain(t):
    t = numpy.atleast_1d(numpy.asarray(t, dtype=float))
    if t.ndim != 1:
        raise InvalidBasisException('evaluation points must be scalar or 1-D')
    if not numpy.all(numpy.isfinite(t)) or numpy.any((t < 0) | (t > 1)):
        raise InvalidBasisException('evaluation points must lie in [0, 1], '
                                    'got {0}'.format(t[(t < 0) | (t > 1) |
                                                       ~numpy.isfinite(t)]))
    return t


class BSplineBasis(object):
    """A clamped B-spline basis of order `order` with `num_basis` functions
    on the normalized domain [0, 1].

    Instances should be created with :func:`make_basis`.
    """
    def __init__(self, order, num_basis, knots):
        self.order = int(order)
        self.num_basis = int(num_basis)
        self.knots = _frozen(knots)

        if len(self.knots) != self.num_basis + self.order:
            raise InvalidBasisException(
                'knot vector of length {0} does not define {1} basis '
                'functions of order {2}'.format(len(self.knots),
                                                self.num_basis, self.order))

    @property
    def key(self):
        return (self.order, self.num_basis)

    @property
    def degree(self):
        return self.order - 1

    def evaluate(self, t):
        """Evaluate every basis function at the points `t`.

        :param t: scalar or 1-D array of points in [0, 1]
        :returns: array of shape (len(t), num_basis)
        """
        t = _check_domain(t)
        knots = self.knots
        tt = t[:, None]

        # order 1: half-open knot-interval indicators
        values = ((tt >= knots[None, :-1]) &
                  (tt < knots[None, 1:])).astype(float)

        # close the domain on the right: at t == 1 the last non-empty
        # interval is active so that the last function evaluates to 1
        at_end = t == knots[-1]
        if numpy.any(at_end):
            last = numpy.nonzero(knots[:-1] < knots[1:])[0][-1]
            values[at_end, last] = 1.0

        for k in range(2, self.order + 1):
            n = len(knots) - k
            left_den = knots[k - 1:k - 1 + n] - knots[:n]
            right_den = knots[k:k + n] - knots[1:1 + n]

            # 0/0 terms of the recursion are defined as 0
            left_ok = left_den > 0
            right_ok = right_den > 0
            left = numpy.where(left_ok,
                               (tt - knots[:n]) /
                               numpy.where(left_ok, left_den, 1.0),
                               0.0)
            right = numpy.where(right_ok,
                                (knots[k:k + n] - tt) /
                                numpy.where(right_ok, right_den, 1.0),
                                0.0)
            values = left * values[:, :n] + right * values[:, 1:n + 1]

        numpy.minimum(values, 1.0, out=values)
        return values

    def __eq__(self, other):
        return (isinstance(other, BSplineBasis) and
                self.key == other.key and
                numpy.array_equal(self.knots, other.knots))

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.key, tuple(self.knots)))

    def __repr__(self):
        msg = ('<steelscript.splinetrees.core.bspline.BSplineBasis('
               'order={0} num_basis={1})>')
        return msg.format(self.order, self.num_basis)


class DesignMatrix(object):
    """Basis functions sampled on the uniform grid of a series length."""
    def __init__(self, basis, values, sample_points):
        self.basis = basis
        self.values = _frozen(values)
        self.sample_points = _frozen(sample_points)

    @property
    def length(self):
        return self.values.shape[0]

    def solve(self, series):
        """Least-squares coefficients for one series or a stack of series.

        :param series: array of shape (P,) or (N, P)
        :returns: array of shape (K,) or (N, K)

        The solver is an orthogonal factorization with column pivoting,
        which returns the minimum-norm solution when the design matrix is
        rank deficient.
        """
        series = numpy.asarray(series, dtype=float)
        if series.shape[-1] != self.length:
            raise InvalidInputException(
                'series length {0} does not match design matrix rows '
                '{1}'.format(series.shape[-1], self.length))

        rhs = series.T if series.ndim == 2 else series
        coeffs = scipy.linalg.lstsq(self.values, rhs,
                                    lapack_driver='gelsy')[0]
        return coeffs.T if series.ndim == 2 else coeffs

    def __repr__(self):
        msg = ('<steelscript.splinetrees.core.bspline.DesignMatrix('
               'length={0} basis={1})>')
        return msg.format(self.length, self.basis)


class CoefficientMatrix(object):
    """N x K matrix of per-observation spline coefficients."""
    def __init__(self, coeffs, basis):
        self.coeffs = _frozen(coeffs)
        self.basis = basis

        if self.coeffs.ndim != 2 or self.coeffs.shape[1] != basis.num_basis:
            raise InvalidInputException(
                'coefficient matrix of shape {0} does not match basis with '
                '{1} functions'.format(self.coeffs.shape, basis.num_basis))

    @property
    def shape(self):
        return self.coeffs.shape

    def __len__(self):
        return self.coeffs.shape[0]

    def __repr__(self):
        msg = ('<steelscript.splinetrees.core.bspline.CoefficientMatrix('
               'rows={0} basis={1})>')
        return msg.format(len(self), self.basis)


def make_basis(order, num_basis):
    """Return a clamped uniform B-spline basis.

    :param int order: spline order o (degree o - 1), at least 1
    :param int num_basis: number of basis functions K, at least `order`

    The knot vector has K + o entries: o zeros, K - o interior knots at
    j / (K - o + 1), then o ones.
    """
    order = int(order)
    num_basis = int(num_basis)
    if order < 1:
        raise InvalidBasisException('basis order must be >= 1, got %d'
                                    % order)
    if num_basis < order:
        raise InvalidBasisException('degenerate basis: num_basis %d is '
                                    'smaller than order %d'
                                    % (num_basis, order))

    n_interior = num_basis - order
    interior = numpy.arange(1, n_interior + 1) / float(n_interior + 1)
    knots = numpy.concatenate([numpy.zeros(order), interior,
                               numpy.ones(order)])
    return BSplineBasis(order, num_basis, knots)


def eval_basis(basis, t):
    """Return the K basis values at a single point `t` in [0, 1]."""
    if numpy.ndim(t) != 0:
        raise InvalidBasisException('eval_basis expects a scalar point')
    return basis.evaluate(t)[0]


def design_matrix(basis, length):
    """Sample `basis` on the grid t_p = (p - 1) / (P - 1), p = 1..P.

    :param basis: :class:`BSplineBasis`
    :param int length: number of samples P, at least 2
    """
    length = int(length)
    if length < 2:
        raise InvalidBasisException('design matrix needs at least 2 sample '
                                    'points, got %d' % length)
    points = numpy.arange(length) / float(length - 1)
    return DesignMatrix(basis, basis.evaluate(points), points)


def fit_coefficients(series, dm):
    """Minimum-norm least-squares coefficients of `series` on `dm`."""
    series = numpy.asarray(series, dtype=float)
    if series.ndim != 1:
        raise InvalidInputException('fit_coefficients expects a single series')
    return dm.solve(series)


def effective_num_basis(order, num_basis, length):
    """Cap the basis count at the series length, never below the order."""
    if num_basis < order:
        raise InvalidBasisException('degenerate basis: num_basis %d is '
                                    'smaller than order %d'
                                    % (num_basis, order))
    return max(order, min(num_basis, length))


def coefficients_matrix(series_set, order, num_basis):
    """Fit every series of `series_set` on one (order, num_basis) basis.

    :param series_set: array of shape (N, P)
    :returns: :class:`CoefficientMatrix`

    The basis count is capped at P; the design matrix is built once and
    shared by all rows.
    """
    series_set = numpy.asarray(series_set, dtype=float)
    if series_set.ndim != 2 or series_set.shape[0] == 0:
        raise InvalidInputException('series_set must be a non-empty N x P '
                                    'matrix, got shape {0}'
                                    .format(series_set.shape))

    length = series_set.shape[1]
    k = effective_num_basis(order, num_basis, length)
    if k != num_basis:
        logger.debug('Capping num_basis %d to %d for series length %d'
                     % (num_basis, k, length))

    dm = design_matrix(make_basis(order, k), length)
    return CoefficientMatrix(dm.solve(series_set), dm.basis)


def reconstruct(coeffs, basis, t):
    """Evaluate the spline sum_j coeffs[j] * B_j(t) at a single point."""
    coeffs = numpy.asarray(coeffs, dtype=float)
    if coeffs.shape != (basis.num_basis,):
        raise InvalidInputException('expected {0} coefficients, got {1}'
                                    .format(basis.num_basis, coeffs.shape))
    return float(numpy.dot(coeffs, eval_basis(basis, t)))
