# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.


"""Accuracy against the number of trees in the ensemble.

Example:

 steel splinetrees sweep -c synthetic.yaml -s 0,1,2,3,4,5,6,7,8,9 --grid 5,25,100
"""

import optparse

from steelscript.splinetrees.core.app import SplineTreesApp, split_list
from steelscript.splinetrees.core.bench import (SweepRecord, records_frame,
                                                sweep_estimators)


class Command(SplineTreesApp):
    help = 'Sweep the ensemble size and report accuracy per size'

    def add_options(self, parser):
        group = optparse.OptionGroup(parser, 'Sweep')
        group.add_option('--grid', default=None,
                         help='comma separated ensemble sizes')
        parser.add_option_group(group)

        super(Command, self).add_options(parser)

    def main(self):
        records = sweep_estimators(self.config,
                                   grid=split_list(self.options.grid, int))
        frame = records_frame([r for r in records if not r.error],
                              SweepRecord._fields)
        if not frame.empty:
            frame['accuracy'] = frame['accuracy'].astype(float)
            mean = (frame.groupby(['dataset', 'model', 'n_estimators'],
                                  sort=False)['accuracy']
                    .mean().reset_index())
            self.print_frame(mean)
        self.print_failures(records)
