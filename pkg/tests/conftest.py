import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA = {}
_PATTERN = re.compile(r"test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    m = _PATTERN.search(report.nodeid)
    if not m:
        return
    key = int(m.group(1))
    name = m.group(2).replace("_", " ")
    prev = _CRITERIA.get(key, (name, "PASS", 0.0))
    status = prev[1]
    if report.failed:
        status = "FAIL"
    elif report.skipped and status == "PASS" and report.when == "setup":
        status = "SKIP"
    _CRITERIA[key] = (name, status, prev[2] + report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA):
        name, status, secs = _CRITERIA[key]
        terminalreporter.write_line(f"criterion {key:2d}: {status}  {name}  ({secs:.2f}s)")
