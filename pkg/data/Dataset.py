from typing import Optional, Sequence
import numpy as np
import pandas as pd

from errors import DatasetFormatError, UnknownNode


class Dataset:
    """
    n x d matrix of finite samples; columns follow the node order of an Scm.
    """
    def __init__(self, samples, names: Optional[Sequence[str]] = None):
        arr = np.asarray(samples, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2:
            raise DatasetFormatError(f'Dataset must be 2-D, got shape {arr.shape}.')
        if not np.all(np.isfinite(arr)):
            raise DatasetFormatError('Dataset contains non-finite entries.')
        self.samples = arr
        if names is None:
            names = [f'x{i}' for i in range(arr.shape[1])]
        if len(names) != arr.shape[1]:
            raise DatasetFormatError(f'{len(names)} names for {arr.shape[1]} columns.')
        self.names = tuple(str(n) for n in names)

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def d(self) -> int:
        return self.samples.shape[1]

    def __len__(self):
        return self.n

    def __repr__(self):
        return f'Dataset(n={self.n}, d={self.d})'

    def column_index(self, key) -> int:
        if isinstance(key, str):
            if key not in self.names:
                raise UnknownNode(f'Unknown column {key!r}.')
            return self.names.index(key)
        if not 0 <= int(key) < self.d:
            raise UnknownNode(f'Column {key} outside [0, {self.d}).')
        return int(key)

    def column(self, key) -> np.ndarray:
        return self.samples[:, self.column_index(key)]

    def select(self, columns) -> 'Dataset':
        idx = [self.column_index(c) for c in columns]
        return Dataset(self.samples[:, idx], [self.names[i] for i in idx])

    def rows(self, index) -> 'Dataset':
        return Dataset(self.samples[index], self.names)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.samples, columns=list(self.names))

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> 'Dataset':
        frame = frame.apply(pd.to_numeric, errors='coerce')
        return cls(frame.to_numpy(dtype=float), [str(c) for c in frame.columns])
