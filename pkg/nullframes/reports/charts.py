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

from abc import ABC, abstractmethod
from typing import Sequence, Union

import matplotlib.figure
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
from mpl_toolkits.mplot3d import Axes3D  # noqa: F401 registers the 3d projection


class AbstractFrameChart(ABC):
    """Abstract Base Class for Charts of sampled frames

    All chart classes implement a `process_data` and a `plot` method.
    The first selects and reshapes the plot data columns in self.df and
    the second draws them with defaults, creating a figure unless an
    axis is given.
    """

    def __init__(self, df: pd.DataFrame, **kwargs):
        """Initialisation function
        """

        self.df = df
        self.fig = None

    def _check_df(self, prefixes: Sequence[str]):
        """Error checking on df having the plot data columns
        """

        missing = [p for p in prefixes if not any(c.startswith(p) for c in self.df.columns)]
        if missing:
            raise ValueError(f'plot data has no columns starting with {missing}')

    @abstractmethod
    def process_data(self):
        pass

    @abstractmethod
    def plot(self, ax=None, **kwargs) -> matplotlib.figure.Figure:
        pass

    def save(self, path: str, dpi: int = 150):
        """Save the figure drawn by plot as a PNG
        """

        if self.fig is None:
            self.plot()
        self.fig.savefig(path, dpi=dpi, bbox_inches='tight')
        plt.close(self.fig)


class FrameMeshChart(AbstractFrameChart):
    """Sampled hypersurface with the xi and N arrows

    Draws the immersion points in three ambient coordinates, spatial
    ones first and the time coordinate vertical, with xi in blue and
    N in red.
    """

    def __init__(self, df: pd.DataFrame, axes: Union[Sequence[str], None] = None, arrow_length: float = 0.15,
                 every: int = 1):
        """Initialisation function

        :param df: plot data with x_, xi_ and N_ columns.
        :param axes: three ambient coordinate names, the second, third and first by default.
        :param arrow_length: length of the normalized arrows.
        :param every: draw arrows at every n-th point.
        """

        super().__init__(df)
        self.axes = axes
        self.arrow_length = arrow_length
        self.every = max(1, int(every))

    def process_data(self, **kwargs):
        """Select the coordinates and arrows, dropping points without a frame
        """

        self._check_df(['x_', 'xi_', 'N_'])
        coordinates = [c[2:] for c in self.df.columns if c.startswith('x_')]
        if self.axes is None:
            self.axes = (coordinates[1:] + coordinates[:1])[:3]
        data = self.df[[f'{p}_{a}' for p in ['x', 'xi', 'N'] for a in self.axes]].dropna()
        self.figdata = data
        return self.figdata

    def plot(self, ax=None, **kwargs) -> matplotlib.figure.Figure:
        """Plotting function

        :param ax: a 3d axis to draw into.
        :param kwargs: passed to ax.set.
        """

        self.process_data()
        if ax is None:
            self.fig = plt.figure()
            ax = self.fig.add_subplot(111, projection='3d')
        else:
            self.fig = ax.get_figure()

        points = self.figdata[[f'x_{a}' for a in self.axes]].to_numpy()
        ax.scatter(points[:, 0], points[:, 1], points[:, 2], s=4, color='grey')
        arrows = points[::self.every]
        for prefix, color in [('xi', 'tab:blue'), ('N', 'tab:red')]:
            vectors = self.figdata[[f'{prefix}_{a}' for a in self.axes]].to_numpy()[::self.every]
            norms = np.linalg.norm(vectors, axis=1)
            norms[norms == 0] = 1.0
            vectors = vectors / norms[:, None]
            ax.quiver(arrows[:, 0], arrows[:, 1], arrows[:, 2], vectors[:, 0], vectors[:, 1], vectors[:, 2],
                      length=self.arrow_length, color=color, label=prefix)
        ax.set(xlabel=self.axes[0], ylabel=self.axes[1], zlabel=self.axes[2], **kwargs)
        ax.legend()
        return self.fig
