from .metrics import (
    mechanism_leakage,
    support_coverage,
    recovery_mse,
    transport_cost_l2,
    mode_fractions,
    circularity,
    metrics_table
)
from .report import ExperimentReport, summarize_reports, content_hash, hardware_note
