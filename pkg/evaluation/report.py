from dataclasses import dataclass, field, asdict
import hashlib
import json
import logging
import math
import os
import platform
from pathlib import Path
import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

# fields that legitimately differ between two runs with the same seed and config
TIMING_KEYS = ('wall_time_s', 'hardware')


def hardware_note() -> str:
    return (f'{platform.system()} {platform.machine()} | {os.cpu_count()} cpus | '
            f'python {platform.python_version()} | numpy {np.__version__}')


def content_hash(*arrays) -> str:
    """Git-style blob hash over the raw bytes of the given arrays."""
    payload = b''.join(np.ascontiguousarray(np.asarray(a, dtype=float)).tobytes() for a in arrays)
    header = f'blob {len(payload)}\0'.encode()
    return hashlib.sha1(header + payload).hexdigest()


@dataclass
class ExperimentReport:
    """
    Result of one experiment run.

    Parameters:
    - name: experiment name
    - metrics: {metric name: finite real}
    - wall_time_s: total wall-clock seconds
    - config_hash: sha256 of the canonical experiment config
    - seed: master seed
    - config: the merged config the run used
    - input_hash: content hash of the generated inputs
    - artifacts: {file stem: DataFrame} written next to the report as CSV
    """
    name: str
    metrics: dict
    wall_time_s: float
    config_hash: str
    seed: int
    config: dict = field(default_factory=dict)
    input_hash: str = ''
    hardware: str = field(default_factory=hardware_note)
    artifacts: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.metrics = {str(k): float(v) for k, v in self.metrics.items()}
        bad = [k for k, v in self.metrics.items() if not math.isfinite(v)]
        if bad:
            raise ValueError(f'{self.name}: non-finite metrics {bad}.')

    def to_dict(self, timing: bool = True) -> dict:
        d = asdict(self)
        d.pop('artifacts')
        if not timing:
            for key in TIMING_KEYS:
                d.pop(key)
        return d

    def to_json(self, path=None, timing: bool = True) -> str:
        text = json.dumps(self.to_dict(timing), indent=2, sort_keys=True)
        if path is not None:
            Path(path).write_text(text)
        return text

    def to_row(self) -> dict:
        return {'experiment': self.name, 'seed': self.seed, 'config_hash': self.config_hash,
                'wall_time_s': self.wall_time_s, **self.metrics}

    def write(self, out_dir) -> Path:
        """report.json, metrics.csv and one CSV per artifact."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        self.to_json(out / 'report.json')
        pd.DataFrame([self.to_row()]).to_csv(out / 'metrics.csv', index=False)
        for stem, frame in self.artifacts.items():
            frame.to_csv(out / f'{stem}.csv', index=False)
        logger.info('%s: wrote report and %d artifacts to %s', self.name, len(self.artifacts), out)
        return out

    @classmethod
    def from_json(cls, path) -> 'ExperimentReport':
        return cls(**json.loads(Path(path).read_text()))


def summarize_reports(reports) -> pd.DataFrame:
    """Flat table, one row per report, metrics as columns."""
    return pd.DataFrame([r.to_row() for r in reports])
