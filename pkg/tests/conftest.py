"""Shared pytest wiring.

The acceptance tests append one line per criterion to ACCEPTANCE_LINES; the
terminal-summary hook below prints them at the end of every run so the
pass/fail ledger is visible even when all tests pass.
"""

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
