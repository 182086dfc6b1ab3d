import pytest

_RESULTS: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name, claim): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    name, claim = mark.args
    failed = rep.failed or (rep.when == "call" and rep.skipped)
    if rep.when == "call" or failed:
        prev = _RESULTS.get(name, ("PASS", claim))[0]
        _RESULTS[name] = ("FAIL" if failed or prev == "FAIL" else "PASS", claim)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    width = max(len(n) for n in _RESULTS)
    for name, (status, claim) in _RESULTS.items():
        tr.write_line(f"{status}  {name:<{width}}  {claim}")
    bad = sum(s == "FAIL" for s, _ in _RESULTS.values())
    tr.write_line(f"{len(_RESULTS) - bad}/{len(_RESULTS)} criteria PASS")
