# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.

# Version ID for ensemble artifact validation
# Increment this when the layout written by serialize.save_ensemble changes
ARTIFACT_VERSION = 1
ARTIFACT_FORMAT = 'splinetrees-ensemble'

N_ESTIMATORS = 100
ORDER_RANGE = (3, 9)
NBASIS_RANGE = (11, 50)
MIN_SAMPLES_SPLIT = 2

# Uniform grid used to integrate reconstructed curves
DIVERSITY_GRID_SIZE = 1000

SWEEP_GRID = [5, 10, 25, 50, 100, 200, 500]
TIMING_GRID = [50, 100, 200]
TIMING_REPEATS = 3

# Relative slack allowed before a timing curve is flagged as non-monotone
TIMING_NOISE_BAND = 0.10

# Named variants: (split strategy, bootstrap)
variants = dict([
    ('RST-B', ('best', False)),
    ('RST-R', ('random', False)),
    ('RST-BB', ('best', True)),
    ('RST-RB', ('random', True)),
])

# The published variant listing swaps the labels of the two bootstrapped
# configurations; reports carry both names.
published_labels = dict([
    ('RF', 'RF'),
    ('RST-B', 'RST-B'),
    ('RST-R', 'RST-R'),
    ('RST-BB', 'RST-RB'),
    ('RST-RB', 'RST-BB'),
])

models = ['RF'] + list(variants.keys())

# Published dataset details: name -> (train, test, length, classes)
reference_datasets = dict([
    ('ChlorineConcentration', (467, 3840, 166, 3)),
    ('Rock', (20, 50, 2844, 4)),
    ('Worms', (181, 77, 900, 5)),
    ('Fish', (175, 175, 463, 7)),
    ('Earthquakes', (322, 139, 512, 2)),
    ('ItalyPowerDemand', (67, 1029, 24, 2)),
])

# Published test accuracies, T=100.  These are reference values only and
# are never reported as measurements of this package.
reference_columns = ['GB', 'RF', 'RST-B', 'RST-R', 'RST-BB', 'RST-RB']
reference_accuracy = dict([
    ('ChlorineConcentration', (0.7427, 0.7156, 0.7396, 0.7430, 0.7042, 0.7094)),
    ('Earthquakes', (0.7482, 0.7482, 0.7554, 0.7554, 0.7482, 0.7626)),
    ('Fish', (0.7029, 0.7771, 0.8343, 0.8400, 0.8114, 0.8229)),
    ('ItalyPowerDemand', (0.9640, 0.9650, 0.9670, 0.9689, 0.9708, 0.9708)),
    ('Rock', (0.6000, 0.6800, 0.6600, 0.7400, 0.7000, 0.7000)),
    ('Worms', (0.4675, 0.5195, 0.5974, 0.5714, 0.5714, 0.5455)),
])

UCR_ARCHIVE_URL = 'https://www.cs.ucr.edu/~eamonn/time_series_data_2018/'
UCR_SUFFIXES = ['.tsv', '.txt', '']

# Synthetic dataset defaults for experiment configs
SYNTHETIC = dict([
    ('n_per_class', 50),
    ('length', 64),
    ('noise_sd', 0.3),
    ('seed', 0),
])
