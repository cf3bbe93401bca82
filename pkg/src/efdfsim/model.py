"""Tasks, jobs and uniform machines.

All times and amounts of work are :class:`fractions.Fraction` values so that
dividing work by a processor speed never rounds.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

RationalLike = Union[int, Fraction, str, float]

# Aliases used in signatures; both are plain Fractions.
TimePoint = Fraction
Duration = Fraction


class UnsupportedInputError(ValueError):
    """Input outside what an operation is defined for."""


def as_rational(value: RationalLike) -> Fraction:
    """Convert ``value`` to an exact Fraction.

    Strings may be integers, decimals or ``"num/den"``. Floats go through
    their shortest repr, so ``0.925`` becomes ``37/40``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(value: Fraction) -> str:
    """Render ``value`` as ``"n"`` or ``"n/d"``."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class TaskSpec:
    """A periodic task.

    ``exec`` is the worst-case execution requirement in work units (the
    time it takes on a unit-speed processor). ``rel_deadline`` defaults to
    the period.
    """

    id: int
    exec: Fraction
    period: Fraction
    rel_deadline: Optional[Fraction] = None
    phase: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "exec", as_rational(self.exec))
        object.__setattr__(self, "period", as_rational(self.period))
        d = self.period if self.rel_deadline is None else as_rational(self.rel_deadline)
        object.__setattr__(self, "rel_deadline", d)
        object.__setattr__(self, "phase", as_rational(self.phase))
        if self.exec <= 0:
            raise ValueError(f"task {self.id}: exec must be positive")
        if self.period <= 0:
            raise ValueError(f"task {self.id}: period must be positive")
        if self.rel_deadline <= 0:
            raise ValueError(f"task {self.id}: deadline must be positive")
        if self.phase < 0:
            raise ValueError(f"task {self.id}: phase must be non-negative")

    @property
    def utilization(self) -> Fraction:
        return self.exec / self.period

    @property
    def density(self) -> Fraction:
        return self.exec / min(self.period, self.rel_deadline)

    @property
    def implicit(self) -> bool:
        return self.rel_deadline == self.period


class JobState(enum.Enum):
    WAITING = "waiting"
    RUNNING = "running"
    COMPLETED = "completed"
    ABORTED = "aborted"
    MISSED = "missed"

    @property
    def terminal(self) -> bool:
        return self in (JobState.COMPLETED, JobState.ABORTED, JobState.MISSED)


@dataclass(eq=False)
class Job:
    """One released instance of a task.

    Jobs are mutable; the simulator owns state transitions. ``index`` is the
    release number k of the owning task, so ``(task_id, index)`` identifies
    a job uniquely.
    """

    task_id: int
    index: int
    release: Fraction
    abs_deadline: Fraction
    remaining: Fraction
    exec: Fraction
    last_cpu: Optional[int] = None
    state: JobState = JobState.WAITING
    rel_deadline: Fraction = field(default=None)

    def __post_init__(self):
        if self.rel_deadline is None:
            self.rel_deadline = self.abs_deadline - self.release

    @property
    def id(self) -> tuple[int, int]:
        return (self.task_id, self.index)

    @property
    def name(self) -> str:
        return f"{self.task_id}.{self.index}"

    @property
    def key(self) -> tuple[Fraction, int]:
        """Priority key: earlier deadline first, then lower task id."""
        return (self.abs_deadline, self.task_id)

    @property
    def active(self) -> bool:
        return not self.state.terminal

    def __repr__(self):
        return (f"Job({self.name}, d={format_rational(self.abs_deadline)}, "
                f"rem={format_rational(self.remaining)}, {self.state.value})")


@dataclass(frozen=True)
class Machine:
    """Uniform multiprocessor: processor ``j`` completes ``speeds[j] * t``
    units of work in ``t`` time units. Index 0 is the fastest."""

    speeds: tuple

    def __init__(self, speeds: Iterable[RationalLike]):
        sp = tuple(as_rational(s) for s in speeds)
        if not sp:
            raise ValueError("a machine needs at least one processor")
        if any(s <= 0 for s in sp):
            raise ValueError("processor speeds must be positive")
        if any(a < b for a, b in zip(sp, sp[1:])):
            raise ValueError("processor speeds must be non-increasing")
        object.__setattr__(self, "speeds", sp)

    @classmethod
    def identical(cls, m: int) -> "Machine":
        return cls([1] * m)

    @property
    def m(self) -> int:
        return len(self.speeds)

    @property
    def fastest(self) -> Fraction:
        return self.speeds[0]

    @property
    def capacity(self) -> Fraction:
        return sum(self.speeds, Fraction(0))

    def __len__(self):
        return len(self.speeds)


def release_job(task: TaskSpec, k: int) -> Job:
    """Return the ``k``-th job of ``task`` (k = 0 is the first release)."""
    if k < 0:
        raise ValueError("job index must be non-negative")
    release = task.phase + k * task.period
    return Job(
        task_id=task.id,
        index=k,
        release=release,
        abs_deadline=release + task.rel_deadline,
        remaining=task.exec,
        exec=task.exec,
        rel_deadline=task.rel_deadline,
    )


def work_done(speed: RationalLike, elapsed: RationalLike) -> Fraction:
    """Work completed by a processor of ``speed`` in ``elapsed`` time."""
    speed = as_rational(speed)
    elapsed = as_rational(elapsed)
    if speed <= 0:
        raise ValueError("speed must be positive")
    if elapsed < 0:
        raise ValueError("elapsed time must be non-negative")
    return speed * elapsed


def hyperperiod(tasks: Iterable[TaskSpec]) -> Fraction:
    """Least common multiple of the (integer) task periods.

    Returns 0 for an empty task set.
    """
    periods = [t.period for t in tasks]
    if not periods:
        return Fraction(0)
    for p in periods:
        if p.denominator != 1:
            raise UnsupportedInputError(f"non-integer period {format_rational(p)}")
    return Fraction(math.lcm(*(p.numerator for p in periods)))


def sort_by_priority(jobs: Iterable[Job]) -> list[Job]:
    return sorted(jobs, key=lambda j: j.key)


def check_unique_ids(tasks: Sequence[TaskSpec]) -> None:
    seen = set()
    for t in tasks:
        if t.id in seen:
            raise ValueError(f"duplicate task id {t.id}")
        seen.add(t.id)
