"""Collects per-criterion outcomes from tests marked ``criterion`` and prints a summary."""

import pytest

_results = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _results.setdefault(number, {"title": title, "tests": {}})
    previous = entry["tests"].get(item.name, "passed")
    if rep.failed:
        status = "failed"
    elif rep.skipped:
        status = "skipped"
    else:
        status = previous
    if previous == "failed":
        status = "failed"
    entry["tests"][item.name] = status


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        entry = _results[number]
        tests = entry["tests"]
        bad = [name for name, status in tests.items() if status != "passed"]
        verdict = "FAIL" if bad else "PASS"
        passed = len(tests) - len(bad)
        line = f"C{number} {verdict}  {entry['title']}  ({passed}/{len(tests)} checks)"
        if bad:
            line += "  not passing: " + ", ".join(bad)
        terminalreporter.write_line(line)
