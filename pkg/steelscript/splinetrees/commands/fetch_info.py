# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.


"""Show where the archive datasets are expected and which are present.

Example:

 steel splinetrees fetch_info --ucr-root /data/UCRArchive_2018

Dataset                Train  Test  Length  Classes  Local
ChlorineConcentration  467    3840  166     3        missing
Earthquakes            322    139   512     2        missing
Fish                   175    175   463     7        missing
ItalyPowerDemand       67     1029  24      2        /data/UCRArchive_2018/ItalyPowerDemand/ItalyPowerDemand_TRAIN.tsv
Rock                   20     50    2844    4        missing
Worms                  181    77    900     5        missing
"""

import os
import optparse

from steelscript.common.app import Application
from steelscript.common.datautils import Formatter

from steelscript.splinetrees.core import _constants
from steelscript.splinetrees.core._exceptions import DatasetException
from steelscript.splinetrees.core.dataset import ucr_paths


class Command(Application):
    help = 'Show the UCR archive layout and reference datasets'

    def add_options(self, parser):
        super(Command, self).add_options(parser)

        group = optparse.OptionGroup(parser, 'Archive')
        group.add_option('--ucr-root', dest='ucr_root',
                         default=os.environ.get('SPLINETREES_UCR_ROOT'),
                         help='root directory of the UCR archive')
        parser.add_option_group(group)

        self.add_standard_options(conn=False)

    def local_path(self, name):
        if not self.options.ucr_root:
            return 'unknown'
        try:
            return ucr_paths(self.options.ucr_root, name)[0]
        except DatasetException:
            return 'missing'

    def main(self):
        print('Download the archive from %s and unpack it so that each '
              'dataset lives in' % _constants.UCR_ARCHIVE_URL)
        print('  <ucr-root>/<name>/<name>_TRAIN.tsv and '
              '<ucr-root>/<name>/<name>_TEST.tsv')
        print('')

        data = []
        for name in sorted(_constants.reference_datasets):
            train, test, length, classes = _constants.reference_datasets[name]
            data.append((name, train, test, length, classes,
                         self.local_path(name)))
        Formatter.print_table(data, ['Dataset', 'Train', 'Test', 'Length',
                                     'Classes', 'Local'])
