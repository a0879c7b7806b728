import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# criterion name -> (PASS/FAIL, detail), filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[name]
        terminalreporter.write_line("%-4s %s: %s" % (status, name, detail))
