# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.

from glob import glob

from setuptools import setup, find_packages
packagedata = True


test = ['mock', 'pytest']

setup_args = {
    'name':               'steelscript.splinetrees',
    'namespace_packages': ['steelscript'],
    'version':            '1.0.0',
    'author':             'Riverbed Technology',
    'author_email':       'eng-github@riverbed.com',
    'url':                'http://pythonhosted.org/steelscript',
    'license':            'MIT',
    'description':        'Randomized spline tree ensembles for time series '
                          'classification with SteelScript',

    'long_description': '''SteelScript Spline Trees
========================

Tree ensembles that classify time series from B-spline coefficients, with
a randomly drawn basis per tree, plus a raw-value random forest baseline
and experiment commands for the UCR archive.

For a complete guide to installation, see:

http://pythonhosted.org/steelscript/
    ''',

    'platforms': 'Linux, Mac OS, Windows',

    'classifiers': [
        'Development Status :: 4 - Beta',
        'Intended Audience :: Developers',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3.6',
        'Topic :: Scientific/Engineering :: Artificial Intelligence',
    ],

    'packages': find_packages(),

    'data_files': (
        ('share/doc/steelscript/docs/splinetrees', glob('docs/*')),
    ),

    'install_requires': (
        'steelscript>=2.0',
        'numpy>=1.17',
        'scipy>=1.6',
        'pandas>=0.25',
        'pyyaml>=5.1',
    ),

    'extras_require': {
        'test': test
    },

    'tests_require': test,

    'python_requires': '>=3.6',

    'entry_points': {
        'steel.commands': [
            'splinetrees = steelscript.splinetrees.commands'
        ],
    },
}

if packagedata:
    setup_args['include_package_data'] = True

setup(**setup_args)
