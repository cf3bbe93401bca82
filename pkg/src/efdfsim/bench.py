"""Comparison-count measurements for the two ready-queue designs."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .model import Job
from .queues import DeadlineClassQueueSet, HeapQueue


def class_deadlines(q: int, base: int = 100) -> list[Fraction]:
    """q relative deadlines spaced 1/q apart starting at ``base``."""
    return [Fraction(base) + Fraction(c, q) for c in range(q)]


def job_stream(q: int, base: int = 100):
    """Endless jobs: job i is released at time i into class i mod q.

    Absolute deadlines increase strictly with i, so in steady state every
    class keeps at least one queued job once the queue holds q or more.
    """
    classes = class_deadlines(q, base)
    i = 0
    while True:
        d = classes[i % q]
        release = Fraction(i)
        yield Job(task_id=i, index=0, release=release, abs_deadline=release + d,
                  remaining=Fraction(1), exec=Fraction(1), rel_deadline=d)
        i += 1


@dataclass(frozen=True)
class QueueCost:
    kind: str
    n: int
    insert: float  # mean comparisons per insert
    pop: float  # mean comparisons per pop

    @property
    def per_op(self) -> float:
        return (self.insert + self.pop) / 2


def steady_state_cost(kind: str, n: int, q: int = 4, pairs: int = 256) -> QueueCost:
    """Fill a queue to ``n`` jobs, then time ``pairs`` insert+pop rounds."""
    queue = HeapQueue() if kind == "heap" else DeadlineClassQueueSet(class_deadlines(q))
    stream = job_stream(q)
    for _ in range(n):
        queue.insert(next(stream))
    ins = pops = 0
    for _ in range(pairs):
        queue.reset_counter()
        queue.insert(next(stream))
        ins += queue.comparisons
        queue.reset_counter()
        queue.pop_earliest()
        pops += queue.comparisons
    return QueueCost(kind, n, ins / pairs, pops / pairs)


def bench_queues(sizes=(10, 100, 1000, 10000), q: int = 4, pairs: int = 256) -> list[QueueCost]:
    return [steady_state_cost(kind, n, q, pairs) for kind in ("heap", "class") for n in sizes]


def fit_log2(costs) -> tuple[float, float]:
    """Least-squares fit of per-op comparisons to a*log2(n) + b."""
    x = np.log2([c.n for c in costs])
    y = np.array([c.per_op for c in costs])
    a, b = np.polyfit(x, y, 1)
    return float(a), float(b)
