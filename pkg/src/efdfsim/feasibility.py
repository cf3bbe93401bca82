"""Schedulability tests, laxity, and the feasible/infeasible job split."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .model import Job, Machine, RationalLike, TaskSpec, as_rational, sort_by_priority


def utilization(tasks: Iterable[TaskSpec]) -> Fraction:
    """Total utilization, sum of exec/period, exactly."""
    return sum((t.exec / t.period for t in tasks), Fraction(0))


def density(tasks: Iterable[TaskSpec]) -> Fraction:
    """Sum of exec / min(period, deadline)."""
    return sum((t.exec / min(t.period, t.rel_deadline) for t in tasks), Fraction(0))


def edf_schedulable_implicit(tasks: Iterable[TaskSpec], capacity: RationalLike = 1) -> bool:
    """Utilization test for implicit-deadline tasks (U <= capacity).

    With the default capacity of one unit-speed processor this is the exact
    uniprocessor EDF test. Raises ``ValueError`` if any task has a deadline
    different from its period.
    """
    tasks = list(tasks)
    bad = [t.id for t in tasks if not t.implicit]
    if bad:
        raise ValueError(f"tasks {bad} do not have implicit deadlines; "
                         "use edf_schedulable_constrained")
    return utilization(tasks) <= as_rational(capacity)


def edf_schedulable_constrained(tasks: Iterable[TaskSpec], capacity: RationalLike = 1) -> bool:
    """Density test: sum of exec / min(period, deadline) <= capacity.

    Sufficient but not necessary once some deadline exceeds its period.
    """
    return density(tasks) <= as_rational(capacity)


def applicable_test(tasks: Sequence[TaskSpec]) -> str:
    """``"implicit"`` if every deadline equals its period, else ``"constrained"``."""
    return "implicit" if all(t.implicit for t in tasks) else "constrained"


def schedulable(tasks: Sequence[TaskSpec], capacity: RationalLike = 1) -> bool:
    tasks = list(tasks)
    if applicable_test(tasks) == "implicit":
        return edf_schedulable_implicit(tasks, capacity)
    return edf_schedulable_constrained(tasks, capacity)


def laxity(job: Job, now: RationalLike, speed: RationalLike) -> Fraction:
    """Time to deadline minus the time the remaining work needs at ``speed``.

    Zero means the job has to run now, without interruption, at ``speed``;
    negative means it cannot finish by its deadline.
    """
    speed = as_rational(speed)
    if speed <= 0:
        raise ValueError("speed must be positive")
    return (job.abs_deadline - as_rational(now)) - job.remaining / speed


@dataclass(frozen=True)
class FeasibilitySplit:
    set_a: tuple
    set_b: tuple

    @property
    def k(self) -> int:
        return len(self.set_a)

    def __iter__(self):
        return iter((self.set_a, self.set_b))


def split_by_feasibility(jobs: Iterable[Job], now: RationalLike, machine: Machine,
                         forced_infeasible=()) -> FeasibilitySplit:
    """Put jobs with non-negative laxity at the fastest speed in A, the rest in B.

    Both halves come back sorted by (deadline, task id). Job ids listed in
    ``forced_infeasible`` go to B regardless of their laxity.
    """
    now = as_rational(now)
    forced = set(forced_infeasible)
    a, b = [], []
    for job in jobs:
        if job.id not in forced and laxity(job, now, machine.fastest) >= 0:
            a.append(job)
        else:
            b.append(job)
    return FeasibilitySplit(tuple(sort_by_priority(a)), tuple(sort_by_priority(b)))


def admit(tasks: Sequence[TaskSpec], capacity: RationalLike) -> tuple[list[TaskSpec], list[TaskSpec]]:
    """Hard admission control.

    Tasks are considered in the given order; each one is accepted only if
    the accepted set plus it still passes the applicable test against
    ``capacity``. Returns ``(accepted, rejected)``.
    """
    capacity = as_rational(capacity)
    accepted, rejected = [], []
    for task in tasks:
        if schedulable(accepted + [task], capacity):
            accepted.append(task)
        else:
            rejected.append(task)
    return accepted, rejected
