"""Shared fixtures: the worked five-heuristic dataset and the acceptance
summary printed at the end of a run."""

from __future__ import annotations

import pytest

from privacy_sentinel.config import EngineConfig
from privacy_sentinel.criticality import ConsequenceFrequency
from privacy_sentinel.demo import demo_snapshot, demo_state
from privacy_sentinel.service import Engine

# The two reference evidence cells quoted throughout the docs: 108 job-loss
# reports and 322 reputation-damage reports for the workplace-vent pattern.
CELL_JOB_LOSS = (50, 48, 10, 0, 0)
CELL_REPUTATION = (0, 0, 44, 188, 90)

FIG_POST_TEXT = (
    "Had such a bad day at the office... I want to quit this job!! "
    "But then I remember I have bills to pay and I instantly get my act together:)"
)
COFFEE_POST_TEXT = "My job at this company is like the coffee they serve...awful!"
HATE_JOB_POST_TEXT = "I hate my job at this company but damn, it pays the rent! #keepcalm"
BOSTON_POST_TEXT = (
    "Moving to Boston was definitely not a good idea...the weather in this "
    "town sucks and so my job at this company! #wrongdecisions"
)


@pytest.fixture
def freq_job_loss():
    return ConsequenceFrequency(CELL_JOB_LOSS)


@pytest.fixture
def freq_reputation():
    return ConsequenceFrequency(CELL_REPUTATION)


@pytest.fixture
def seeded_state():
    return demo_state()


@pytest.fixture
def seeded_engine():
    engine = Engine(config=EngineConfig(), genesis=demo_snapshot())
    yield engine
    engine.close()


@pytest.fixture
def fresh_engine():
    engine = Engine(config=EngineConfig())
    yield engine
    engine.close()


ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def acceptance_record():
    """Record one acceptance criterion's outcome for the summary block."""

    def record(criterion: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE_RESULTS[criterion] = (bool(ok), detail)
        assert ok, f"{criterion}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[criterion]
        verdict = "PASS" if ok else "FAIL"
        line = f"{criterion:<58} {verdict}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
