# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.



"""
The SplineTrees package offers randomized spline tree ensembles for time
series classification, together with representation diversity diagnostics
and an experiment harness.
"""
from steelscript.splinetrees.core.bspline import *
from steelscript.splinetrees.core.tree import *
from steelscript.splinetrees.core.ensemble import *
from steelscript.splinetrees.core.diversity import *
from steelscript.splinetrees.core.dataset import *
from steelscript.splinetrees.core.serialize import *
from steelscript.splinetrees.core.bench import *
