# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.

import logging
import optparse

import pandas

from steelscript.common.app import Application
from steelscript.common.datautils import Formatter

from steelscript.splinetrees.core._exceptions import ConfigException
from steelscript.splinetrees.core.bench import ExperimentConfig, DatasetSpec

logger = logging.getLogger(__name__)


def split_list(value, convert=str):
    """Parse a comma separated option value; None stays None."""
    if value is None:
        return None
    try:
        return [convert(v.strip()) for v in value.split(',') if v.strip()]
    except ValueError:
        raise ConfigException('invalid list %r' % value)


class SplineTreesApp(Application):
    """Common command line handling for experiment commands.

    The experiment comes from ``--config`` (YAML) when given, otherwise
    from the library defaults; the remaining options override it.
    """

    def __init__(self, *args, **kwargs):
        super(SplineTreesApp, self).__init__(*args, **kwargs)
        self.config = None

    def add_options(self, parser):
        super(SplineTreesApp, self).add_options(parser)

        group = optparse.OptionGroup(parser, 'Experiment')
        group.add_option('-c', '--config', default=None,
                         help='YAML experiment config file')
        group.add_option('-o', '--output-dir', dest='output_dir',
                         default=None,
                         help='directory for CSV and JSON results')
        group.add_option('-s', '--seeds', default=None,
                         help='comma separated master seeds, e.g. 0,1,2')
        group.add_option('-m', '--models', default=None,
                         help='comma separated models out of RF, RST-B, '
                              'RST-R, RST-BB, RST-RB')
        group.add_option('-w', '--workers', type='int', default=None,
                         help='number of concurrent workers')
        group.add_option('-g', '--grid-size', dest='grid_size', type='int',
                         default=None,
                         help='grid points used to integrate curves')
        group.add_option('-d', '--dataset', dest='datasets', action='append',
                         default=None,
                         help='archive dataset name, may be repeated; '
                              'requires --ucr-root or ucr_root in the config')
        group.add_option('--ucr-root', dest='ucr_root', default=None,
                         help='root directory of the UCR archive')
        parser.add_option_group(group)

        self.add_standard_options(conn=False)

    def load_config(self):
        o = self.options
        if o.config:
            config = ExperimentConfig.from_yaml(o.config)
        else:
            config = ExperimentConfig()

        overrides = {'output_dir': o.output_dir,
                     'seeds': split_list(o.seeds, int),
                     'models': split_list(o.models),
                     'workers': o.workers,
                     'grid_size': o.grid_size,
                     'ucr_root': o.ucr_root}
        if o.datasets:
            root = o.ucr_root or config.ucr_root
            overrides['datasets'] = [DatasetSpec.parse(name, root)
                                     for name in o.datasets]
        return config.replace(**overrides)

    def setup(self):
        super(SplineTreesApp, self).setup()
        self.config = self.load_config()
        logger.debug('Experiment config: %s' % self.config.to_dict())

    def print_frame(self, frame, floatfmt='%.4f'):
        """Print a pandas frame with steelscript's table formatter."""
        data = []
        for row in frame.itertuples(index=False):
            data.append([floatfmt % v if isinstance(v, float) and
                         not pandas.isnull(v) else v for v in row])
        Formatter.print_table(data, [str(c) for c in frame.columns])

    def print_failures(self, records):
        failed = list(dict.fromkeys((r.dataset, r.model, r.error)
                                    for r in records if r.error))
        if failed:
            print('')
            Formatter.print_table(failed, ['Dataset', 'Model', 'Error'])
