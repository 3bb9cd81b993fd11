"""
A labeled sample from a stream.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Sample:
    """
    Dense feature vector of dimension d and its label.
    """

    features: np.ndarray
    label: float

    @property
    def dim(self) -> int:
        return self.features.shape[0]
