# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.


"""Median single-worker fit time per ensemble size."""

import optparse

from steelscript.common.datautils import Formatter

from steelscript.splinetrees.core.app import SplineTreesApp, split_list
from steelscript.splinetrees.core.bench import time_fit


class Command(SplineTreesApp):
    help = 'Measure ensemble fit time against the number of trees'

    def add_options(self, parser):
        group = optparse.OptionGroup(parser, 'Timing')
        group.add_option('--grid', default=None,
                         help='comma separated ensemble sizes')
        group.add_option('-r', '--repeats', type='int', default=None,
                         help='fits per size, the median is reported')
        parser.add_option_group(group)

        super(Command, self).add_options(parser)

    def main(self):
        records = time_fit(self.config,
                           grid=split_list(self.options.grid, int),
                           repeats=self.options.repeats)
        data = [(r.dataset, r.model, r.n_estimators,
                 '%.4f' % r.median_seconds, 'yes' if r.monotone else 'NO')
                for r in records if not r.error]
        Formatter.print_table(data, ['Dataset', 'Model', 'Trees',
                                     'Median (s)', 'Monotone'])
        self.print_failures(records)
