import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion."""
    rows = []
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            if getattr(rep, "when", "call") != "call" and status == "passed":
                continue
            m = _CRITERION.search(rep.nodeid)
            if m:
                rows.append((int(m.group(1)), m.group(2),
                             "PASS" if status == "passed" else "FAIL"))
    if not rows:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num, name, verdict in sorted(set(rows)):
        terminalreporter.write_line(
            "criterion %2d %-40s %s" % (num, name.replace("_", " "), verdict))
