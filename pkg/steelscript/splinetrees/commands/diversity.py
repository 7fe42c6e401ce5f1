# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.


"""Representation diversity (D, Q_D, V_F) of fitted spline tree ensembles.

One row per observation is written to diversity.csv; the dataset means
are printed.
"""

import optparse

from steelscript.common.datautils import Formatter

from steelscript.splinetrees.core.app import SplineTreesApp
from steelscript.splinetrees.core.bench import diversity_report_cmd


class Command(SplineTreesApp):
    help = 'Report representation diversity of spline tree ensembles'

    def add_options(self, parser):
        group = optparse.OptionGroup(parser, 'Diversity')
        group.add_option('--split', default=None, choices=['train', 'test'],
                         help='measure on the train or test split')
        parser.add_option_group(group)

        super(Command, self).add_options(parser)

    def main(self):
        config = self.config.replace(diversity_split=self.options.split)
        rows = diversity_report_cmd(config)
        data = [(r.dataset, r.model, r.split, '%.6g' % r.D, '%.6g' % r.Q_D,
                 '%.6g' % r.V_F)
                for r in rows if r.observation == 'mean' and not r.error]
        Formatter.print_table(data, ['Dataset', 'Model', 'Split', 'D', 'Q_D',
                                     'V_F'])
        self.print_failures(rows)
