from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from efdfsim import (Machine, TaskSpec, UnsupportedInputError, as_rational, hyperperiod,
                     release_job, work_done)

rationals = st.fractions(min_value=0, max_value=1000, max_denominator=64)
positive = st.fractions(min_value=Fraction(1, 64), max_value=100, max_denominator=64)


def test_release_first_job_of_p1():
    job = release_job(TaskSpec(1, 1, 8, 8), 0)
    assert (job.release, job.abs_deadline, job.remaining) == (0, 8, 1)
    assert job.last_cpu is None
    assert job.state.value == "waiting"


def test_release_kth_job():
    job = release_job(TaskSpec(2, 2, 5, 5), 3)
    assert (job.release, job.abs_deadline) == (15, 20)


def test_release_constrained_deadline():
    job = release_job(TaskSpec(3, 4, 10, 4), 1)
    assert (job.release, job.abs_deadline) == (10, 14)


def test_release_with_phase():
    job = release_job(TaskSpec(1, 1, 4, phase="1/2"), 2)
    assert job.release == Fraction(17, 2)


def test_release_negative_index():
    with pytest.raises(ValueError):
        release_job(TaskSpec(1, 1, 4), -1)


@pytest.mark.parametrize("speed, elapsed, expected", [
    (1, 7, 7),
    (2, 3, 6),
    ("1/2", 3, Fraction(3, 2)),
])
def test_work_done(speed, elapsed, expected):
    assert work_done(speed, elapsed) == expected


def test_work_done_rejects_bad_speed():
    with pytest.raises(ValueError):
        work_done(0, 1)


@pytest.mark.parametrize("periods, expected", [
    ([8, 5, 10], 40),
    ([6], 6),
    ([4, 6, 10], 60),
])
def test_hyperperiod(periods, expected):
    assert hyperperiod([TaskSpec(i, 1, p) for i, p in enumerate(periods)]) == expected


def test_hyperperiod_non_integer():
    with pytest.raises(UnsupportedInputError):
        hyperperiod([TaskSpec(1, 1, "5/2")])


def test_task_validation():
    with pytest.raises(ValueError):
        TaskSpec(1, 0, 5)
    with pytest.raises(ValueError):
        TaskSpec(1, 1, 0)
    with pytest.raises(ValueError):
        TaskSpec(1, 1, 5, 0)
    # overload is legal input
    assert TaskSpec(1, 9, 5).utilization == Fraction(9, 5)


def test_deadline_defaults_to_period():
    assert TaskSpec(1, 1, 7).rel_deadline == 7


def test_machine_ordering():
    assert Machine([2, 1, "1/2"]).speeds == (2, 1, Fraction(1, 2))
    with pytest.raises(ValueError):
        Machine([1, 2])
    with pytest.raises(ValueError):
        Machine([1, 0])
    with pytest.raises(ValueError):
        Machine([])


def test_as_rational():
    assert as_rational("1/3") == Fraction(1, 3)
    assert as_rational(0.925) == Fraction(37, 40)
    assert as_rational("0.925") == Fraction(37, 40)
    with pytest.raises(TypeError):
        as_rational(True)


@given(rationals, rationals)
def test_rational_round_trip(a, b):
    assert (a + b) - b == a


@given(positive, rationals, rationals)
def test_work_done_additive(s, t1, t2):
    assert work_done(s, t1 + t2) == work_done(s, t1) + work_done(s, t2)


@given(positive, positive, positive, st.integers(0, 50))
def test_deadline_offset_exact(e, p, d, k):
    job = release_job(TaskSpec(1, e, p, d), k)
    assert job.abs_deadline - job.release == d
