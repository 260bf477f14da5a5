import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_criteria = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[name] = report.outcome == "passed"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        number, label = name[len("test_criterion_"):].split("_", 1)
        tag = "PASS" if _criteria[name] else "FAIL"
        terminalreporter.write_line(f"{tag}  criterion {int(number):2d}  {label.replace('_', ' ')}")


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: acceptance criteria")
