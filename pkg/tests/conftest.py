from __future__ import annotations

import pytest


@pytest.fixture(scope="session")
def f_table():
    from fivedist.bounds import bootstrap_f_table

    return bootstrap_f_table()


@pytest.fixture(scope="session")
def dodeca():
    from fivedist.dodeca import build_dodecahedron

    return build_dodecahedron()


# one summary line per acceptance criterion

_ACCEPTANCE: dict[str, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if not item.name.startswith("test_ac"):
        return
    title = (item.function.__doc__ or item.name).strip().splitlines()[0]
    if report.failed:
        _ACCEPTANCE[item.name] = ("FAIL", title)
    elif report.when == "call" and item.name not in _ACCEPTANCE:
        _ACCEPTANCE[item.name] = ("PASS", title)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        verdict, title = _ACCEPTANCE[name]
        terminalreporter.write_line(f"{name[5:9].upper()} {verdict}  {title}")
