"""Collects per-criterion outcomes and prints one PASS/FAIL line per acceptance criterion."""

from collections import OrderedDict

import pytest

_RESULTS: "OrderedDict[str, dict]" = OrderedDict()


def _criterion(item):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return None
    cid = str(mark.args[0])
    title = mark.args[1] if len(mark.args) > 1 else mark.kwargs.get("title", "")
    return cid, title


def pytest_collection_modifyitems(items):
    for item in items:
        c = _criterion(item)
        if c is not None:
            entry = _RESULTS.setdefault(c[0], {"title": c[1], "outcomes": [], "details": []})
            entry["expected"] = entry.get("expected", 0) + 1


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    c = _criterion(item)
    if c is None:
        return
    entry = _RESULTS[c[0]]
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        entry["outcomes"].append("passed" if rep.passed else rep.outcome)
        entry["details"].extend(f"{k}={v}" for k, v in item.user_properties)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid, entry in sorted(_RESULTS.items(), key=lambda kv: int(kv[0])):
        outs = entry["outcomes"]
        if not outs:
            verdict = "NOT-RUN"
        elif len(outs) == entry["expected"] and all(o == "passed" for o in outs):
            verdict = "PASS"
        else:
            verdict = "FAIL"
        details = "; ".join(entry["details"])
        terminalreporter.write_line(f"ACCEPTANCE {cid} {verdict} {entry['title']}"
                                    + (f" [{details}]" if details else ""))
