import logging
from pathlib import Path
import pandas as pd
from joblib import Parallel, delayed

from evaluation import summarize_reports
from .config import overrides_for

logger = logging.getLogger(__name__)


def _run_one(name, fn, seed, overrides, large):
    logger.info('running %s (seed=%d)', name, seed)
    return fn(seed=seed, cfg=overrides, large=large)


class ExperimentRunner:
    """
    Runs any number of experiments and collects their reports.

    Parameters:
    - experiments: dict of {name: run function (seed, cfg, large) -> ExperimentReport}
    - seed: master seed handed to every experiment
    - overrides: JSON document, either flat or keyed by experiment name
    - large: use the full-size dimensions
    - jobs: independent experiments run in parallel when > 1; each experiment's
            timed region stays inside one worker
    """
    def __init__(self, experiments: dict, seed: int = 42, overrides: dict = None,
                 large: bool = False, jobs: int = 1):
        self.experiments = experiments
        self.seed = int(seed)
        self.overrides = dict(overrides or {})
        self.large = bool(large)
        self.jobs = int(jobs)

    def run(self) -> dict:
        """Returns {name: ExperimentReport}, in the order the experiments were given."""
        if not self.experiments:
            raise ValueError('No experiments provided.')

        # 1) One task per experiment, with its own slice of the overrides
        tasks = [
            delayed(_run_one)(name, fn, self.seed, overrides_for(name, self.overrides), self.large)
            for name, fn in self.experiments.items()
        ]

        # 2) Serial unless asked otherwise
        reports = Parallel(n_jobs=self.jobs)(tasks)
        return dict(zip(self.experiments, reports))

    @staticmethod
    def write(reports: dict, out_dir) -> pd.DataFrame:
        """Every report under out_dir/<name>/, plus summary.csv with one row per experiment."""
        out = Path(out_dir)
        for name, report in reports.items():
            report.write(out / name if len(reports) > 1 else out)
        summary = summarize_reports(list(reports.values()))
        if len(reports) > 1:
            out.mkdir(parents=True, exist_ok=True)
            summary.to_csv(out / 'summary.csv', index=False)
        return summary
