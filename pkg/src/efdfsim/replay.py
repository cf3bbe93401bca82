"""Check a finished simulation against the invariants every trace must meet.

Each checker returns a list of human-readable violations; empty means clean.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction

from .model import JobState
from .sim import SimReport


def check_injective(report: SimReport) -> list[str]:
    out = []
    for d in report.decisions:
        names = list(d.assignment.values())
        if len(names) != len(set(names)):
            out.append(f"t={d.time}: job on two processors {d.assignment}")
    return out


def check_work_conserving(report: SimReport) -> list[str]:
    """No processor idles while the policy has an eligible job for it.

    Global policies must also fill the fastest processors first.
    """
    m = len(report.speeds)
    out = []
    for d in report.decisions:
        if report.policy == "partitioned-ff":
            owners = report.partition or {}
            for cpu in range(m):
                if cpu in d.assignment:
                    continue
                waiting = [n for n in d.eligible if owners.get(int(n.split(".")[0])) == cpu]
                if waiting:
                    out.append(f"t={d.time}: cpu {cpu} idle with {waiting} ready")
            continue
        want = min(len(d.eligible), m)
        if len(d.assignment) != want:
            out.append(f"t={d.time}: {len(d.assignment)} busy, expected {want}")
        elif set(d.assignment) != set(range(want)):
            out.append(f"t={d.time}: busy processors {sorted(d.assignment)} are not the fastest {want}")
    return out


def check_deadlines(report: SimReport) -> list[str]:
    """No execution after a job's absolute deadline."""
    out = []
    for seg in report.segments:
        deadline = report.jobs[seg.job].deadline
        if seg.end > deadline:
            out.append(f"job {seg.job} ran until {seg.end} past deadline {deadline}")
    return out


def check_work(report: SimReport) -> list[str]:
    """Completed jobs received exactly their execution requirement."""
    out = []
    done = defaultdict(Fraction)
    for seg in report.segments:
        if seg.work != report.speeds[seg.processor] * (seg.end - seg.start):
            out.append(f"segment {seg} work does not match speed x time")
        done[seg.job] += seg.work
    for name, rec in report.jobs.items():
        got = done.get(name, Fraction(0))
        if rec.state is JobState.COMPLETED and got != rec.exec:
            out.append(f"job {name} completed with {got} of {rec.exec} work")
        elif rec.state is not JobState.COMPLETED and got >= rec.exec:
            out.append(f"job {name} received {got} work but is {rec.state.value}")
    for cpu, busy in report.per_processor_busy.items():
        if busy > report.horizon:
            out.append(f"cpu {cpu} busy {busy} beyond horizon {report.horizon}")
    if report.completions + report.misses + report.aborts > report.released:
        out.append("more finished jobs than released")
    return out


def violations(report: SimReport) -> dict[str, list[str]]:
    """Run every applicable check. The deadline check applies to hard mode."""
    res = {
        "injective": check_injective(report),
        "work_conserving": check_work_conserving(report),
        "work": check_work(report),
    }
    if report.mode == "hard":
        res["deadlines"] = check_deadlines(report)
    return res


def assert_clean(report: SimReport) -> None:
    bad = {k: v for k, v in violations(report).items() if v}
    if bad:
        raise AssertionError(f"{report.policy}/{report.mode}: {bad}")
