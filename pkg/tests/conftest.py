"""Shared fixtures and the acceptance-summary reporter.

Acceptance tests (tests/test_acceptance.py) register one result line each;
the lines are echoed in the terminal summary so a plain ``pytest -v`` run
always shows the full pass/fail table, including for passing tests whose
stdout would otherwise be swallowed by capture.
"""

import pytest

from qvepair.fields import ChirpedPulse, FieldConfig

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(name: str, passed: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance summary")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def short_pulse() -> FieldConfig:
    """tau=5 chirp-free pulse; cheap enough for per-test solves."""
    return FieldConfig([ChirpedPulse(amplitude=0.1, carrier_frequency=0.5, width=5.0)])


@pytest.fixture(scope="session")
def long_pulse() -> FieldConfig:
    """The strong one-color benchmark field (E0=0.1, omega=0.02, tau=100)."""
    return FieldConfig([ChirpedPulse(amplitude=0.1, carrier_frequency=0.02, width=100.0)])


@pytest.fixture(scope="session")
def two_color() -> FieldConfig:
    """Strong low-frequency pulse plus weak high-frequency pulse (10:1)."""
    return FieldConfig(
        [
            ChirpedPulse(amplitude=0.1, carrier_frequency=0.02, width=100.0),
            ChirpedPulse(amplitude=0.01, carrier_frequency=0.2, width=100.0),
        ]
    )
