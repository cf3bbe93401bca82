from fractions import Fraction

import pytest

from efdfsim import Job, TaskSpec


def make_job(task_id, deadline, remaining, release=0, last_cpu=None, rel_deadline=None, index=0):
    release = Fraction(release)
    deadline = Fraction(deadline)
    return Job(task_id=task_id, index=index, release=release, abs_deadline=deadline,
               remaining=Fraction(remaining), exec=Fraction(remaining), last_cpu=last_cpu,
               rel_deadline=None if rel_deadline is None else Fraction(rel_deadline))


@pytest.fixture
def three_tasks():
    # (C, T) rows of the three-process example
    return [TaskSpec(1, 1, 8), TaskSpec(2, 2, 5), TaskSpec(3, 4, 10)]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, title, detail in sorted(RESULTS):
        terminalreporter.write_line(f"[{status}] criterion {number}: {title} | {detail}")
