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

from typing import Dict


class Tolerances:
    """ Numerical thresholds shared by every check. """

    DEFAULTS = {
        'tol_exact': 1e-9,
        'tol_fd': 1e-5,
        'tol_rel': 1e-6,
        'floor': 1e-9,
        'fd_step': 1e-4,
        'tol_rad': 1e-8
    }

    def __init__(self, tol_exact: float = 1e-9, tol_fd: float = 1e-5, tol_rel: float = 1e-6, floor: float = 1e-9,
                 fd_step: float = 1e-4, tol_rad: float = 1e-8):
        """ Create a Tolerances instance.

        :param tol_exact: tolerance for quantities computed from jets only.
        :param tol_fd: tolerance for quantities that go through finite differences.
        :param tol_rel: relative spread that still counts as constant.
        :param floor: absolute floor used for null tests and relative spreads.
        :param fd_step: finite difference step in parameter space.
        :param tol_rad: radical detection threshold relative to the largest singular value of the induced Gram matrix.
        """

        self.tol_exact = tol_exact
        self.tol_fd = tol_fd
        self.tol_rel = tol_rel
        self.floor = floor
        self.fd_step = fd_step
        self.tol_rad = tol_rad

    def __eq__(self, other):
        return isinstance(other, Tolerances) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return f'Tolerances({self.to_dict()})'

    def to_dict(self) -> Dict:
        return {key: getattr(self, key) for key in Tolerances.DEFAULTS}

    @staticmethod
    def from_dict(dict_: Dict) -> 'Tolerances':
        values = dict(Tolerances.DEFAULTS)
        values.update({k: float(v) for k, v in dict_.items() if k in Tolerances.DEFAULTS})
        return Tolerances(**values)

    def replace(self, **kwargs) -> 'Tolerances':
        values = self.to_dict()
        values.update({k: v for k, v in kwargs.items() if v is not None})
        return Tolerances(**values)


DEFAULT_TOLERANCES = Tolerances()
