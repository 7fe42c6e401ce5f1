# Copyright (c) 2019 Riverbed Technology, Inc.
#
# This software is licensed under the terms and conditions of the MIT License
# accompanying the software ("License").  This software is distributed "AS IS"
# as set forth in the License.

from steelscript.common.exceptions import RvbdException


class SplineTreesException(RvbdException):
    pass


class InvalidBasisException(SplineTreesException):
    def __init__(self, *args, **kwargs):
        SplineTreesException.__init__(self, *args, **kwargs)


class InvalidInputException(SplineTreesException):
    def __init__(self, *args, **kwargs):
        SplineTreesException.__init__(self, *args, **kwargs)


class DatasetException(SplineTreesException):
    def __init__(self, *args, **kwargs):
        SplineTreesException.__init__(self, *args, **kwargs)


class RaggedRowException(DatasetException):
    def __init__(self, message, lineno=None):
        super(RaggedRowException, self).__init__(message)
        self.lineno = lineno


class ConfigException(SplineTreesException):
    def __init__(self, *args, **kwargs):
        super(ConfigException, self).__init__(*args, **kwargs)


class SerializationException(SplineTreesException):
    def __init__(self, *args, **kwargs):
        super(SerializationException, self).__init__(*args, **kwargs)
