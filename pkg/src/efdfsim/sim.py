"""Event-driven simulation of periodic task sets on a uniform machine.

Scheduling points are releases, completions, laxity expiries, deadlines and
the horizon; between two points the assignment is fixed, so remaining work
is updated exactly with rational arithmetic.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .feasibility import admit, laxity
from .model import (Job, JobState, Machine, TaskSpec, UnsupportedInputError,
                    as_rational, check_unique_ids, format_rational, hyperperiod, release_job)
from .queues import make_queue
from .schedulers import (POLICIES, ScheduleDecision, efdf_assign, global_edf_assign,
                         partition_first_fit, partitioned_assign)

MODES = ("hard", "soft")

# Order of processing for events that share a timestamp.
EVENT_ORDER = ("release", "completion", "laxity_expiry", "deadline", "horizon")

TRACE_HEADER = ("time", "processor", "job", "task", "event")


@dataclass(frozen=True)
class TraceRecord:
    time: Fraction
    processor: Optional[int]
    job: Optional[str]
    task: Optional[int]
    event: str

    def row(self):
        return (format_rational(self.time),
                "" if self.processor is None else str(self.processor),
                self.job or "",
                "" if self.task is None else str(self.task),
                self.event)


@dataclass(frozen=True)
class Segment:
    """A stretch of execution of one job on one processor."""
    job: str
    processor: int
    start: Fraction
    end: Fraction
    work: Fraction


@dataclass(frozen=True)
class DecisionRecord:
    time: Fraction
    assignment: dict  # processor -> job name
    eligible: tuple  # job names the policy could have run
    set_b: tuple = ()


@dataclass
class JobRecord:
    task: int
    release: Fraction
    deadline: Fraction
    exec: Fraction
    state: JobState = JobState.WAITING
    finish: Optional[Fraction] = None


@dataclass
class SimReport:
    policy: str
    mode: str
    speeds: tuple
    horizon: Fraction
    released: int = 0
    completions: int = 0
    misses: int = 0
    aborts: int = 0
    migrations: int = 0
    preemptions: int = 0
    rejected: tuple = ()
    per_processor_busy: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)
    segments: list = field(default_factory=list)
    decisions: list = field(default_factory=list)
    jobs: dict = field(default_factory=dict)
    partition: Optional[dict] = None

    def metrics(self) -> dict:
        """The scalar metrics, with times as exact fraction strings."""
        return {
            "policy": self.policy,
            "mode": self.mode,
            "speeds": [format_rational(s) for s in self.speeds],
            "horizon": format_rational(self.horizon),
            "released": self.released,
            "completions": self.completions,
            "misses": self.misses,
            "aborts": self.aborts,
            "migrations": self.migrations,
            "preemptions": self.preemptions,
            "rejected": list(self.rejected),
            "per_processor_busy": {str(k): format_rational(v)
                                   for k, v in sorted(self.per_processor_busy.items())},
        }

    def trace_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        for rec in self.trace:
            writer.writerow(rec.row())
        return buf.getvalue()

    def write_trace(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.trace_csv())

    def write_metrics(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.metrics(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def resolve_horizon(tasks: Sequence[TaskSpec], horizon) -> Fraction:
    if horizon is None or horizon == "hyperperiod":
        try:
            h = hyperperiod(tasks)
        except UnsupportedInputError as exc:
            raise UnsupportedInputError(
                f"{exc}; an explicit horizon is required for non-integer periods") from None
        return h
    h = as_rational(horizon)
    if h <= 0:
        raise ValueError("horizon must be positive")
    return h


class _Run:
    """Mutable state of one simulation."""

    def __init__(self, tasks, machine, policy, mode, horizon, queue):
        self.machine = machine
        self.policy = policy
        self.mode = mode
        self.horizon = horizon
        self.run_set_b = mode == "soft"
        self.report = SimReport(policy, mode, machine.speeds, horizon)
        self.report.per_processor_busy = {cpu: Fraction(0) for cpu in range(machine.m)}

        tasks = sorted(tasks, key=lambda t: t.id)
        self.partition = None
        if policy == "partitioned-ff":
            self.partition = partition_first_fit(tasks, machine)
            rejected = set(self.partition.rejected)
            self.report.partition = dict(self.partition.mapping)
            admitted = [t for t in tasks if t.id not in rejected]
            self.report.rejected = self.partition.rejected
        elif mode == "hard":
            admitted, rejected = admit(tasks, machine.capacity)
            self.report.rejected = tuple(t.id for t in rejected)
        else:
            admitted = tasks
        self.tasks = admitted
        self.next_index = {t.id: 0 for t in admitted}
        self.queue = make_queue(queue, {t.rel_deadline for t in admitted} or {1})
        self.running: dict[int, Job] = {}
        self.now = Fraction(0)

    # -- bookkeeping -------------------------------------------------------

    def trace(self, event, job=None, cpu=None):
        self.report.trace.append(TraceRecord(
            self.now, cpu, None if job is None else job.name,
            None if job is None else job.task_id, event))

    def finish(self, job, state, event, cpu=None):
        job.state = state
        self.queue.remove(job)
        rec = self.report.jobs[job.name]
        rec.state = state
        rec.finish = self.now
        if cpu is None:
            cpu = next((c for c, j in self.running.items() if j is job), None)
        if cpu is not None:
            del self.running[cpu]
        self.trace(event, job, cpu)

    def next_release(self, task) -> Fraction:
        return task.phase + self.next_index[task.id] * task.period

    def advance(self, t: Fraction):
        dt = t - self.now
        if dt < 0:
            raise RuntimeError("time went backwards")
        if dt > 0:
            for cpu, job in sorted(self.running.items()):
                speed = self.machine.speeds[cpu]
                work = speed * dt
                job.remaining -= work
                if job.remaining < 0:
                    raise RuntimeError(f"job {job.name} overran its work")
                self.report.per_processor_busy[cpu] += dt
                self.report.segments.append(Segment(job.name, cpu, self.now, t, work))
        self.now = t

    # -- event timing ------------------------------------------------------

    def expiry_times(self) -> dict:
        """Instant at which each feasible job's laxity at the fastest speed
        reaches zero, for jobs not already executing at that speed."""
        out = {}
        fastest = self.machine.fastest
        on_cpu = {job.id: cpu for cpu, job in self.running.items()}
        for job in self.queue.snapshot():
            cpu = on_cpu.get(job.id)
            speed = Fraction(0) if cpu is None else self.machine.speeds[cpu]
            if speed >= fastest:
                continue
            lax = laxity(job, self.now, fastest)
            if lax >= 0:
                out[job.id] = self.now + lax / (1 - speed / fastest)
        return out

    # -- event processing --------------------------------------------------

    def process_events(self, expiring):
        # releases
        if self.now < self.horizon:
            for task in self.tasks:
                while self.next_release(task) == self.now:
                    job = release_job(task, self.next_index[task.id])
                    self.next_index[task.id] += 1
                    self.queue.insert(job)
                    self.report.released += 1
                    self.report.jobs[job.name] = JobRecord(
                        task.id, job.release, job.abs_deadline, job.exec)
                    self.trace("release", job)
        # completions
        for cpu, job in sorted(self.running.items()):
            if job.remaining == 0:
                self.report.completions += 1
                self.finish(job, JobState.COMPLETED, "completion", cpu)
        # laxity expiries
        for job in self.queue.snapshot():
            if job.id in expiring:
                self.trace("laxity_expiry", job)
        # deadline misses
        for job in self.queue.snapshot():
            if job.abs_deadline <= self.now:
                self.report.misses += 1
                self.finish(job, JobState.MISSED, "miss")

    def decide(self) -> ScheduleDecision:
        active = self.queue.snapshot()
        if self.policy == "edf":
            return global_edf_assign(active, self.machine, self.now)
        if self.policy == "partitioned-ff":
            return partitioned_assign(active, self.machine, self.partition, self.now)
        # A zero-laxity job that does not get a fastest processor now has
        # negative laxity an instant later; move it to B and decide again.
        fastest = self.machine.fastest
        forced = set()
        while True:
            dec = efdf_assign(active, self.machine, self.now,
                              run_set_b=self.run_set_b, forced_infeasible=forced)
            doomed = set()
            for job in dec.split.set_a:
                if laxity(job, self.now, fastest) != 0:
                    continue
                cpu = dec.processor_of(job.id)
                if cpu is None or self.machine.speeds[cpu] < fastest:
                    doomed.add(job.id)
            if not doomed:
                return dec
            forced |= doomed

    def apply(self, dec: ScheduleDecision):
        by_id = {job.id: job for job in self.queue.snapshot()}
        for jid in sorted(dec.aborted):
            job = by_id.pop(jid)
            self.report.aborts += 1
            self.finish(job, JobState.ABORTED, "abort")

        new = {cpu: by_id[jid] for cpu, jid in dec.assignment.items()}
        new_ids = {job.id for job in new.values()}
        for cpu, job in sorted(self.running.items()):
            if job.id not in new_ids:
                job.state = JobState.WAITING
                self.report.preemptions += 1
                self.trace("preempt", job, cpu)
        old = {job.id: cpu for cpu, job in self.running.items()}
        for cpu, job in sorted(new.items()):
            if old.get(job.id) == cpu:
                continue
            if job.last_cpu is not None and job.last_cpu != cpu:
                self.report.migrations += 1
                self.trace("migrate", job, cpu)
            else:
                self.trace("run", job, cpu)
            job.last_cpu = cpu
            job.state = JobState.RUNNING
        self.running = new

        eligible = tuple(j.name for j in self.queue.snapshot())
        set_b = tuple(j.name for j in dec.split.set_b if j.active)
        self.report.decisions.append(DecisionRecord(
            self.now, {cpu: job.name for cpu, job in new.items()}, eligible,
            set_b if self.policy == "efdf" else ()))

    def run(self) -> SimReport:
        if not self.tasks:
            self.trace("horizon")
            return self.report
        while True:
            expiring = set()
            if self.policy == "efdf":
                expiring = {jid for jid, t in self.expiry_times().items() if t == self.now}
            self.process_events(expiring)
            if self.now >= self.horizon:
                self.trace("horizon")
                return self.report
            self.apply(self.decide())
            self.step()

    def step(self):
        candidates = [self.horizon]
        candidates += [self.next_release(t) for t in self.tasks]
        for cpu, job in self.running.items():
            candidates.append(self.now + job.remaining / self.machine.speeds[cpu])
        candidates += [j.abs_deadline for j in self.queue.snapshot()]
        if self.policy == "efdf":
            candidates += list(self.expiry_times().values())
        t = min(c for c in candidates if c > self.now)
        self.advance(t)


def simulate(tasks: Iterable[TaskSpec], machine: Machine, policy: str = "edf",
             mode: str = "soft", horizon=None, queue: str = "heap") -> SimReport:
    """Simulate ``tasks`` on ``machine`` until ``horizon``.

    ``policy`` is one of ``"edf"``, ``"efdf"``, ``"partitioned-ff"``. In hard
    mode, edf/efdf admit tasks only while the applicable utilization or
    density test holds against the machine's total speed, and efdf aborts
    jobs as soon as they become infeasible. In soft mode everything is
    admitted and efdf runs infeasible jobs on otherwise idle processors.
    The partitioned policy always drops tasks first-fit cannot place.

    ``horizon`` defaults to the hyperperiod.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    tasks = list(tasks)
    check_unique_ids(tasks)
    if tasks:
        horizon = resolve_horizon(tasks, horizon)
    else:
        horizon = Fraction(0) if horizon in (None, "hyperperiod") else as_rational(horizon)
    run = _Run(tasks, machine, policy, mode, horizon, queue)
    return run.run()


def compare(tasks: Iterable[TaskSpec], machine: Machine, policies: Sequence[str] = ("edf", "efdf"),
            mode: str = "soft", horizon=None) -> dict:
    """Run every policy on the same input; returns ``{policy: SimReport}`` in input order."""
    tasks = list(tasks)
    return {p: simulate(tasks, machine, p, mode, horizon) for p in policies}
