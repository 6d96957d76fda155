from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from tbtrellis import analysis

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


class ChainTracker:
    """Counts every property report checked for the implication chains during the run."""

    def __init__(self):
        self.checked = 0
        self.violations: list[str] = []
        self._original = None

    def install(self):
        self._original = analysis.check_implication_chain

        def tracked(report):
            self.checked += 1
            try:
                self._original(report)
            except AssertionError as e:
                self.violations.append(str(e))
                raise

        analysis.check_implication_chain = tracked

    @property
    def original(self):
        return self._original or analysis.check_implication_chain

    def uninstall(self):
        if self._original is not None:
            analysis.check_implication_chain = self._original


CHAIN = ChainTracker()
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_configure(config):
    CHAIN.install()


def pytest_unconfigure(config):
    CHAIN.uninstall()


@pytest.fixture
def chain_tracker():
    return CHAIN


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    tr = terminalreporter
    chain_key = next((k for k in ACCEPTANCE if k.split()[0] == "9"), None)
    if chain_key is not None:
        ACCEPTANCE[chain_key] = (not CHAIN.violations,
                                 f"{CHAIN.checked} property reports over the whole run, {len(CHAIN.violations)} violations")
    if ACCEPTANCE:
        tr.section("acceptance criteria")
        for key in sorted(ACCEPTANCE, key=lambda k: (int(k.split()[0]), k)):
            ok, detail = ACCEPTANCE[key]
            tr.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
    tr.section("implication chains")
    status = "PASS" if not CHAIN.violations else "FAIL"
    tr.write_line(f"[{status}] {CHAIN.checked} property reports checked over the whole run, "
                  f"{len(CHAIN.violations)} violations")


def pytest_sessionfinish(session, exitstatus):
    if CHAIN.violations and session.exitstatus == 0:
        session.exitstatus = 1
