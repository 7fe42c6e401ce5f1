# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.


"""Fit and score every (dataset, model, seed) cell of an experiment.

Example:

 steel splinetrees run -c italy.yaml -s 0,1,2,3,4 -o results

prints the mean test accuracy over the seeds, one row per dataset and
one column per model.  Per-run records are written to records.csv and
the table to table.csv.
"""

import optparse

from steelscript.splinetrees.core.app import SplineTreesApp
from steelscript.splinetrees.core.bench import run_experiment, accuracy_table


class Command(SplineTreesApp):
    help = 'Run a spline tree classification experiment'

    def add_options(self, parser):
        group = optparse.OptionGroup(parser, 'Run')
        group.add_option('--save-models', dest='save_models', default=False,
                         action='store_true',
                         help='also write every fitted ensemble as JSON')
        group.add_option('--diversity', dest='record_diversity',
                         default=False, action='store_true',
                         help='record mean representation diversity per run')
        parser.add_option_group(group)

        super(Command, self).add_options(parser)

    def main(self):
        config = self.config
        if self.options.record_diversity:
            config = config.replace(record_diversity=True)

        records = run_experiment(config, save_models=self.options.save_models)
        self.print_frame(accuracy_table(records, config.models,
                                        [d.name for d in config.datasets]))
        self.print_failures(records)
