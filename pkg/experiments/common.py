import logging
import time

from evaluation import ExperimentReport, content_hash
from .config import config_hash

logger = logging.getLogger(__name__)


class Stopwatch:
    """Wall-clock since construction; `lap()` returns seconds since the previous lap."""
    def __init__(self):
        self.start = self.last = time.perf_counter()

    def lap(self) -> float:
        now = time.perf_counter()
        elapsed, self.last = now - self.last, now
        return elapsed

    @property
    def total(self) -> float:
        return time.perf_counter() - self.start


def make_report(name, metrics, clock: Stopwatch, cfg: dict, seed: int, inputs=(), artifacts=None):
    report = ExperimentReport(
        name=name,
        metrics=metrics,
        wall_time_s=clock.total,
        config_hash=config_hash(cfg),
        seed=seed,
        config=cfg,
        input_hash=content_hash(*inputs) if inputs else '',
        artifacts=artifacts or {},
    )
    logger.info('%s finished in %.1fs', name, report.wall_time_s)
    return report
