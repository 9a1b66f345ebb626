import pytest

CRITERIA = {
    1: "exact tensor reproduction (verify-paper, < 5 s)",
    2: "block-formula oracle on fixtures and 20 random algebras (< 30 s)",
    3: "closed form vs RK4, first integrals, speed (< 60 s)",
    4: "flat-case periods on flat N4",
    5: "distinguished-period identity and |e*| <= omega",
    6: "pH round trip and H(1,2) witness",
    7: "isometry families, determinants, iota on hq",
    8: "property suites",
}

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n): test belongs to acceptance criterion n")


def pytest_runtest_logreport(report):
    marker = getattr(report, "acceptance", None)
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        ok = report.outcome == "passed"
        _results.setdefault(marker, []).append(ok)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is not None:
        report.acceptance = mark.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        outcomes = _results.get(n)
        if outcomes is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {title}")
