import sys

import pytest

from masc.harness import MODELS, load_model


@pytest.fixture(scope="session")
def models():
    return {name: load_model(name) for name in MODELS}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
