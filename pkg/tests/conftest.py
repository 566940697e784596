"""Shared pytest hooks.

The acceptance tests each record a one-line verdict; stdout capture would
hide the lines for passing tests, so they are replayed in a summary section
after the run.
"""

VERDICTS = []


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance verdicts")
        for line in VERDICTS:
            terminalreporter.line(line)
