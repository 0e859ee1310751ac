import json
import sys
from pathlib import Path

import pytest

from restrix import tables

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def corpus():
    return {k: tables.load_table(k) for k in tables.CORPUS}


@pytest.fixture(scope="session")
def atlas_fusions():
    return json.loads((DATA / "atlas_fusions.json").read_text())


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.line(n))
