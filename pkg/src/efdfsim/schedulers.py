"""Assignment policies evaluated at each scheduling point.

Each policy maps the active jobs at an instant to processors. Processors are
indexed from 0 (fastest) to m-1 (slowest).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .feasibility import FeasibilitySplit, split_by_feasibility
from .model import Job, Machine, RationalLike, TaskSpec, as_rational, sort_by_priority

POLICIES = ("edf", "efdf", "partitioned-ff")


@dataclass(frozen=True)
class ScheduleDecision:
    assignment: dict  # processor index -> job id
    split: FeasibilitySplit
    aborted: frozenset = frozenset()

    def __post_init__(self):
        ids = list(self.assignment.values())
        if len(ids) != len(set(ids)):
            raise ValueError("a job was assigned to two processors")

    def processor_of(self, job_id) -> Optional[int]:
        for cpu, jid in self.assignment.items():
            if jid == job_id:
                return cpu
        return None


def global_edf_assign(jobs: Iterable[Job], machine: Machine, now: RationalLike = 0) -> ScheduleDecision:
    """Global EDF on a uniform machine.

    The min(n, m) earliest-deadline jobs run; the earliest goes to the
    fastest processor and so on down. When fewer than m jobs are active the
    slowest processors idle.
    """
    ordered = sort_by_priority(jobs)
    assignment = {cpu: job.id for cpu, job in enumerate(ordered[:machine.m])}
    return ScheduleDecision(assignment, FeasibilitySplit(tuple(ordered), ()))


def efdf_assign(jobs: Iterable[Job], machine: Machine, now: RationalLike,
                affinity: Optional[Mapping] = None, run_set_b: bool = False,
                forced_infeasible=()) -> ScheduleDecision:
    """Earliest Feasible Deadline First with processor affinity.

    1. Split the jobs into A (non-negative laxity at the fastest speed) and
       B (the rest); both sorted by deadline, then task id.
    2. Let top = the first min(k, m) jobs of A.
    3. A job of ``top`` whose last processor j is among the first min(k, m)
       processors stays on j. When several claim the same j the earliest
       deadline keeps it.
    4. Remaining processors j < min(k, m) take the earliest unplaced jobs of A.
    5. If k < m and ``run_set_b``, processors k..m-1 take the earliest jobs of
       B. Otherwise every B job is reported in ``aborted``.

    ``affinity`` maps job id -> last processor; by default each job's
    ``last_cpu`` is used. ``forced_infeasible`` names job ids to put in B
    whatever their laxity (the simulator uses it for zero-laxity jobs that
    cannot get a fastest processor).
    """
    jobs = list(jobs)
    split = split_by_feasibility(jobs, now, machine, forced_infeasible)
    set_a, set_b = split.set_a, split.set_b
    m = machine.m
    slots = min(split.k, m)
    top = set_a[:slots]

    if affinity is None:
        affinity = {j.id: j.last_cpu for j in jobs if j.last_cpu is not None}

    assignment: dict = {}
    placed = set()
    for job in top:
        cpu = affinity.get(job.id)
        if cpu is not None and cpu < slots and cpu not in assignment:
            assignment[cpu] = job.id
            placed.add(job.id)

    rest = iter(j for j in set_a if j.id not in placed)
    for cpu in range(slots):
        if cpu not in assignment:
            assignment[cpu] = next(rest).id

    aborted = frozenset()
    if not run_set_b:
        aborted = frozenset(j.id for j in set_b)
    elif split.k < m:
        for cpu, job in zip(range(split.k, m), set_b):
            assignment[cpu] = job.id
    return ScheduleDecision(dict(sorted(assignment.items())), split, aborted)


@dataclass(frozen=True)
class Partition:
    mapping: dict  # task id -> processor index
    rejected: tuple  # task ids that fit nowhere
    load: tuple  # utilization assigned to each processor

    def __getitem__(self, task_id):
        return self.mapping[task_id]


def partition_first_fit(tasks: Sequence[TaskSpec], machine: Union[Machine, int]) -> Partition:
    """First-fit decreasing by utilization.

    Processor j accepts tasks while its total utilization stays within its
    speed. Tasks that fit nowhere are returned in ``rejected``.
    """
    if isinstance(machine, int):
        machine = Machine.identical(machine)
    load = [Fraction(0)] * machine.m
    mapping, rejected = {}, []
    for task in sorted(tasks, key=lambda t: (-t.utilization, t.id)):
        for cpu, speed in enumerate(machine.speeds):
            if load[cpu] + task.utilization <= speed:
                load[cpu] += task.utilization
                mapping[task.id] = cpu
                break
        else:
            rejected.append(task.id)
    return Partition(mapping, tuple(sorted(rejected)), tuple(load))


def partitioned_assign(jobs: Iterable[Job], machine: Machine, partition: Partition,
                       now: RationalLike = 0) -> ScheduleDecision:
    """Per-processor EDF over the tasks each processor owns."""
    ordered = sort_by_priority(j for j in jobs if j.task_id in partition.mapping)
    assignment = {}
    for job in ordered:
        cpu = partition.mapping[job.task_id]
        if cpu not in assignment:
            assignment[cpu] = job.id
    return ScheduleDecision(dict(sorted(assignment.items())), FeasibilitySplit(tuple(ordered), ()))
