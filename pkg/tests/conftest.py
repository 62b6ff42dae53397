# Criterion lines from the acceptance suite, shown in the terminal summary so
# they survive output capture.
LINES = []


def pytest_terminal_summary(terminalreporter):
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
