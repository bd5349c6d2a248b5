ACCEPTANCE = "test_acceptance.py::test_acceptance["
_outcomes = {}


def pytest_runtest_logreport(report):
    if ACCEPTANCE not in report.nodeid:
        return
    if report.failed or report.when == "call":
        _outcomes.setdefault(report.nodeid, "FAIL" if report.failed else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid in sorted(_outcomes):
        ident = nodeid.split("[", 1)[1].rstrip("]")
        number, slug = ident.split("-", 1)
        terminalreporter.write_line(f"criterion {int(number):2d} {slug}: {_outcomes[nodeid]}")
