from __future__ import annotations

import re

import pytest

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")
_results: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = _CRITERION.search(item.nodeid)
    if not m:
        return
    num = int(m.group(1))
    title = (item.function.__doc__ or item.name).strip().splitlines()[0]
    entry = _results.setdefault(num, {"title": title, "passed": True, "detail": []})
    if rep.failed:
        entry["passed"] = False
    if rep.when == "call":
        entry["detail"] += [f"{k} {v}" for k, v in rep.user_properties]


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        e = _results[num]
        status = "PASS" if e["passed"] else "FAIL"
        detail = f"  [{'; '.join(e['detail'])}]" if e["detail"] else ""
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {e['title']}{detail}")
