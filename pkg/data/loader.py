import struct
from pathlib import Path
from typing import Optional, Sequence
import numpy as np
import pandas as pd

from errors import DatasetFormatError
from .Dataset import Dataset

MAGIC = b'CSBD'
HEADER = struct.Struct('<4sIII')    # magic, n, d, reserved -> 16 bytes
BINARY_SUFFIXES = ('.bin', '.csbd')


def write_f32(path, array: np.ndarray):
    """Write a 2-D array as little-endian float32 behind the 16-byte CSBD header."""
    arr = np.asarray(array, dtype='<f4')
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        arr = arr.reshape(arr.shape[0], -1)
    with open(path, 'wb') as fh:
        fh.write(HEADER.pack(MAGIC, arr.shape[0], arr.shape[1], 0))
        fh.write(np.ascontiguousarray(arr).tobytes())


def read_f32(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if len(raw) < HEADER.size:
        raise DatasetFormatError(f'{path}: file shorter than the CSBD header.')
    magic, n, d, _ = HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise DatasetFormatError(f'{path}: bad magic {magic!r}, expected {MAGIC!r}.')
    expected = HEADER.size + 4 * n * d
    if len(raw) != expected:
        raise DatasetFormatError(f'{path}: expected {expected} bytes for {n}x{d}, found {len(raw)}.')
    return np.frombuffer(raw, dtype='<f4', offset=HEADER.size).reshape(n, d).astype(float)


class DatasetLoader:
    """
    Reads and writes datasets. Format is picked from the file suffix:
    CSV with a header row of node names, or the CSBD float32 binary.
    """
    def __init__(self, path, names: Optional[Sequence[str]] = None):
        self.path = Path(path)
        self.names = names

    @property
    def is_binary(self) -> bool:
        return self.path.suffix.lower() in BINARY_SUFFIXES

    def load(self) -> Dataset:
        if not self.path.exists():
            raise FileNotFoundError(f'No dataset at {self.path}.')
        if self.is_binary:
            return Dataset(read_f32(self.path), self.names)

        frame = pd.read_csv(self.path)
        if frame.empty:
            raise DatasetFormatError(f'{self.path}: no rows.')
        data = Dataset.from_frame(frame)
        if self.names is not None:
            data = data.select(self.names)
        return data

    def save(self, data: Dataset):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        if self.is_binary:
            write_f32(self.path, data.samples)
        else:
            data.to_frame().to_csv(self.path, index=False)
