"""Shared pytest hooks.

After a run that included the acceptance module, repeat a one-line
PASS/FAIL verdict per criterion in the terminal summary so the outcome
is visible without digging through captured output.
"""

import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome, verdict in (("passed", "PASS"), ("failed", "FAIL")):
        for report in terminalreporter.stats.get(outcome, []):
            if getattr(report, "when", "call") != "call":
                continue
            found = _CRITERION.search(report.nodeid)
            if found:
                rows.append((int(found.group(1)), found.group(2), verdict))
    if not rows:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num, name, verdict in sorted(rows):
        label = name.replace("_", " ")
        terminalreporter.write_line(f"criterion {num:02d} {label}: {verdict}")
