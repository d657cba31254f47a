# Copyright 2020 Curtin University
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from typing import Dict, Union


class ExpressionSyntaxError(ValueError):
    """ An expression could not be parsed. """

    def __init__(self, message: str, position: int):
        """ Create an ExpressionSyntaxError.

        :param message: the error message.
        :param position: the character offset in the source where parsing failed.
        """

        super().__init__(f'{message} at position {position}')
        self.position = position


class UnknownIdentifierError(ValueError):
    """ An expression refers to a name that is neither a declared variable, a function nor a constant. """

    def __init__(self, name: str, position: int):
        super().__init__(f"unknown identifier '{name}' at position {position}")
        self.name = name
        self.position = position


class ArityError(ValueError):
    """ A function or field was called with the wrong number of arguments. """
    pass


class SingularMetricError(ArithmeticError):
    """ The metric matrix is not invertible at a point. """
    pass


class SignatureError(ValueError):
    """ The metric is not Lorentzian at a check point. """
    pass


class ImmersionError(ValueError):
    """ The parametrization Jacobian is rank deficient. """
    pass


class DegeneracyError(ValueError):
    """ The induced metric does not have a one dimensional radical. """
    pass


class FrameError(ValueError):
    """ A null frame cannot be built from the supplied data. """
    pass


class GaugeError(ValueError):
    """ A gauge function vanishes on the grid. """
    pass


class StencilError(ValueError):
    """ A finite difference stencil leaves the parameter domain. """
    pass


class CatalogError(KeyError):
    """ Unknown catalog entry or variant. """
    pass


class NullFieldError(ValueError):
    """ A vector field is null where a non-null field is required. """
    pass


class ExportError(ValueError):
    """ A plot data export requested an array that the report does not contain. """
    pass


class ConfigError(ValueError):
    """ A run configuration failed validation. """

    def __init__(self, message: str, errors: Union[Dict, None] = None):
        super().__init__(message)
        self.errors = errors if errors is not None else dict()
