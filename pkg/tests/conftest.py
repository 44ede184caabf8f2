#: one "CRITERION n: PASS/FAIL" line per acceptance criterion, filled in by
#: tests/test_acceptance.py and echoed after the run summary
CRITERION_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not CRITERION_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for line in CRITERION_RESULTS:
        terminalreporter.write_line(line)
