"""Collects the outcome of tests marked ``acceptance`` and prints one line per criterion."""

import pytest

_results: dict[str, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(id, description): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("acceptance")
    if marker is not None:
        outcome.get_result().acceptance = (marker.args[0], marker.args[1])


def pytest_runtest_logreport(report):
    marker = getattr(report, "acceptance", None)
    if marker is None:
        return
    crit, description = marker
    entry = _results.setdefault(crit, {"description": description, "failed": []})
    if report.outcome == "failed":
        entry["failed"].append(report.nodeid.split("::")[-1])


def _order(crit: str):
    digits = "".join(ch for ch in crit if ch.isdigit())
    return int(digits or 0), crit


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_results, key=_order):
        entry = _results[crit]
        line = f"{'FAIL' if entry['failed'] else 'PASS'} {crit}: {entry['description']}"
        if entry["failed"]:
            line += f" (failing: {', '.join(entry['failed'])})"
        terminalreporter.write_line(line)
