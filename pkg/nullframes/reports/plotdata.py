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

import json
import logging
from typing import Dict, List, Sequence, Union

import numpy as np
import pandas as pd

from nullframes.cli.runner import Report
from nullframes.errors import ExportError
from nullframes.hypersurfaces.model import Model
from nullframes.utils.config_utils import schema_path

FLOAT_FORMAT = '%.17g'
FRAME = 'frame'
ALL = 'all'


def column_contract() -> Dict:
    with open(schema_path('plotdata_columns.json'), 'r') as f:
        return json.load(f)


def frame_columns(model: Model, screen: str) -> pd.DataFrame:
    """ Parameters, immersion point and frame vectors at every grid point, NaN where the frame fails.

    :param model: the model.
    :param screen: the screen whose frame is exported.
    :return: one row per grid point.
    """

    immersion = model.immersion
    coordinates = model.ambient.coordinates
    frame = model.frame(screen)
    n = immersion.screen_dim
    columns = ([f'u_{p}' for p in immersion.parameters] + [f'x_{c}' for c in coordinates] +
               [f'xi_{c}' for c in coordinates] + [f'N_{c}' for c in coordinates] +
               [f'e{i}_{c}' for i in range(n) for c in coordinates])
    rows = []
    for index, u in enumerate(immersion.grid_points()):
        x = immersion.point(u)
        try:
            sample = frame.at(u)
            vectors = [sample.xi, sample.N] + list(sample.screen)
        except (ArithmeticError, ValueError) as e:
            logging.warning(f'frame_columns: point {index} has no frame: {e}')
            vectors = [np.full(len(coordinates), np.nan)] * (n + 2)
        rows.append(np.concatenate([u, x] + vectors))
    return pd.DataFrame(rows, columns=columns) if rows else pd.DataFrame(columns=columns)


def residual_columns(report: Report, names: Sequence[str], count: int) -> pd.DataFrame:
    """ Per sample residual series of the selected checks, aligned to grid indices.

    :param report: the report.
    :param names: the check names.
    :param count: the number of grid points.
    :return: one column res_<check>_<residual> per series, NaN where a sample was excluded.
    """

    data = dict()
    for number, outcome in enumerate(report.outcomes):
        name = outcome.spec['name']
        if name not in names:
            continue
        result = outcome.result
        for key, values in sorted(result.residuals.items()):
            indices = result.indices.get(key)
            if indices is None or len(indices) != len(values) or any(i is None for i in indices):
                continue
            column = np.full(count, np.nan)
            for i, value in zip(indices, values):
                if 0 <= i < count and value is not None:
                    column[i] = value
            label = f'res_{name}_{key}'
            if label in data:
                label = f'{label}_{number}'
            data[label] = column
    return pd.DataFrame(data, index=range(count))


def export_plotdata(report: Report, what: Union[str, Sequence[str]], path: str, model: Union[Model, None] = None,
                    screen: Union[str, None] = None) -> List[str]:
    """ Write plot data as CSV with a sidecar file describing the columns.

    :param report: the report holding the residual series.
    :param what: 'all', 'frame' or check names present in the report.
    :param path: the CSV path; the sidecar is written to path + '.columns.json'.
    :param model: the model, required for frame columns.
    :param screen: the screen for frame columns, the first screen by default.
    :return: the column names.
    """

    names = [what] if isinstance(what, str) else list(what)
    checks = [outcome.spec['name'] for outcome in report.outcomes]
    unknown = [name for name in names if name not in (ALL, FRAME) and name not in checks]
    if unknown:
        raise ExportError(f'unknown array names {unknown}, available: {[ALL, FRAME] + sorted(set(checks))}')
    with_frame = (FRAME in names or ALL in names) and model is not None
    if FRAME in names and model is None:
        raise ExportError('frame columns need the model')
    selected = checks if ALL in names else [name for name in names if name != FRAME]

    if model is not None:
        count = len(model.immersion.grid_points())
    else:
        count = 1 + max((i for o in report.outcomes for indices in o.result.indices.values() for i in indices
                         if i is not None), default=-1)

    frames = [pd.DataFrame({'index': np.arange(count)})]
    if with_frame:
        frames.append(frame_columns(model, screen if screen is not None else model.screen_names[0]))
    frames.append(residual_columns(report, selected, count))
    df = pd.concat([f.reset_index(drop=True) for f in frames], axis=1)
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT)

    contract = column_contract()
    with open(path + '.columns.json', 'w') as f:
        json.dump({'version': contract['version'], 'columns': list(df.columns), 'patterns': contract['columns']}, f,
                  indent=2, sort_keys=True)
    logging.info(f'export_plotdata: {len(df.columns)} columns and {count} rows written to {path}')
    return list(df.columns)
