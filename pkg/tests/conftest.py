from __future__ import annotations

import sys
from pathlib import Path

# make the shared helpers importable as plain modules
sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[name]
        terminalreporter.write_line(f"criterion {name}: {'PASS' if ok else 'FAIL'} ({detail})")
