"""Shared pytest wiring: the acceptance summary block.

After the run, print one PASS/FAIL line per acceptance criterion that
executed, with its measured runtime, so the verdicts are visible even
though per-test stdout is captured.
"""


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, ok, elapsed, note in RESULTS:
        status = "PASS" if ok else "FAIL"
        suffix = f"  [{note}]" if note else ""
        terminalreporter.write_line(f"[{status}] {name} ({elapsed:.2f}s){suffix}")
