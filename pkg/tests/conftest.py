"""Shared pytest wiring for the acceptance gate.

test_acceptance appends one status line per criterion to ACCEPTANCE_LINES;
the terminal-summary hook prints them after the run so the gate's verdict
is visible even for criteria whose tests pass (captured stdout is otherwise
shown only on failure).
"""

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
