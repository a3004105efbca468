from pathlib import Path

import pytest

from nichols_lift.config import parse_config, resolve

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"

# criterion number -> (description, passed); filled by test_acceptance.py
CRITERIA: dict[int, tuple[str, bool]] = {}


def load_session(name: str, **kw):
    return resolve(parse_config((CONFIGS / name).read_text()), **kw)


@pytest.fixture(scope="session")
def zeta9():
    return load_session("zeta9.cfg")


@pytest.fixture(scope="session")
def qplane():
    return load_session("qplane.cfg")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        desc, ok = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {desc}")
