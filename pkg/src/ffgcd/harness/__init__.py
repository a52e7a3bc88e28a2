"""Instance generators, verdicts and suite runner."""

from .suites import SUITES, InstanceSpec, dumps, report_csv, run_suite, write_report
from .verdicts import BRANCHES, STATUSES, Verdict

__all__ = [
    "BRANCHES",
    "InstanceSpec",
    "STATUSES",
    "SUITES",
    "Verdict",
    "dumps",
    "report_csv",
    "run_suite",
    "write_report",
]
