"""
QOA / MRLS 비교 실험 및 보고서 출력 모듈
"""

from .harness import BenchRecord, BenchSummary, improvement_pct, run_comparison, summarize
from .report import parse_report, save_report, write_report, write_report_xlsx

__all__ = [
    "BenchRecord",
    "BenchSummary",
    "improvement_pct",
    "run_comparison",
    "summarize",
    "parse_report",
    "save_report",
    "write_report",
    "write_report_xlsx",
]
