import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=300,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def karate():
    from netdepth import load_karate

    return load_karate()



# ---------------------------------------------------------------- acceptance summary
# Tests marked ``@pytest.mark.criterion(n, "title")`` are folded into one
# PASS/FAIL/SKIP line per criterion at the end of the run. Strings a test
# attaches with ``record_property("detail", ...)`` are printed underneath.

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or not (report.when == "call" or report.failed or report.skipped):
        return
    n, title = mark.args
    entry = _CRITERIA.setdefault(n, {"title": title, "outcomes": [], "details": []})
    if report.when == "call":
        entry["details"] += [f"{item.name}: {v}" for k, v in item.user_properties
                             if k == "detail"]
    if report.skipped:
        reason = report.longrepr[2].removeprefix("Skipped: ") if isinstance(report.longrepr, tuple) else ""
        entry["outcomes"].append("skipped")
        entry["details"].append(f"{item.name}: skipped ({reason})")
    elif report.failed:
        entry["outcomes"].append("failed")
        msg = str(call.excinfo.value).strip().splitlines() if call.excinfo else []
        entry["details"].append(f"{item.name}: FAILED {msg[0] if msg else ''}")
    else:
        entry["outcomes"].append("passed")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        outs = e["outcomes"]
        if "failed" in outs:
            verdict = "FAIL"
        elif all(o == "skipped" for o in outs):
            verdict = "SKIP"
        else:
            verdict = "PASS"
        tr.write_line(f"criterion {n}: {verdict}  {e['title']}")
        for d in e["details"]:
            tr.write_line(f"    {d}")
