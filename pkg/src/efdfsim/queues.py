"""Ready queues keyed by (absolute deadline, task id).

Two designs with comparison counters so their costs can be measured:

* :class:`HeapQueue` - a binary min-heap, O(log n) insert and pop.
* :class:`DeadlineClassQueueSet` - one FIFO per relative deadline. Jobs of
  one class released in time order are already in deadline order, so insert
  is an append and pop only scans the q queue heads.
"""

from __future__ import annotations

import heapq
from collections import deque
from fractions import Fraction
from typing import Iterable

from .model import Job, as_rational


class EmptyQueueError(IndexError):
    pass


class HeapQueue:
    def __init__(self):
        self._heap: list[Job] = []
        self._ids: set = set()
        self.comparisons = 0

    def __len__(self):
        return len(self._heap)

    def __bool__(self):
        return bool(self._heap)

    def __contains__(self, job):
        return job.id in self._ids

    def reset_counter(self):
        self.comparisons = 0

    def _less(self, a: Job, b: Job) -> bool:
        self.comparisons += 1
        return a.key < b.key

    def _sift_up(self, i):
        heap = self._heap
        while i > 0:
            parent = (i - 1) >> 1
            if self._less(heap[i], heap[parent]):
                heap[i], heap[parent] = heap[parent], heap[i]
                i = parent
            else:
                break

    def _sift_down(self, i):
        heap = self._heap
        n = len(heap)
        while True:
            left = 2 * i + 1
            if left >= n:
                return
            child = left
            right = left + 1
            if right < n and self._less(heap[right], heap[left]):
                child = right
            if self._less(heap[child], heap[i]):
                heap[i], heap[child] = heap[child], heap[i]
                i = child
            else:
                return

    def insert(self, job: Job) -> None:
        if job.id in self._ids:
            raise ValueError(f"job {job.name} is already queued")
        self._ids.add(job.id)
        self._heap.append(job)
        self._sift_up(len(self._heap) - 1)

    def peek(self) -> Job:
        if not self._heap:
            raise EmptyQueueError("peek from an empty queue")
        return self._heap[0]

    def pop_earliest(self) -> Job:
        heap = self._heap
        if not heap:
            raise EmptyQueueError("pop from an empty queue")
        top = heap[0]
        last = heap.pop()
        if heap:
            heap[0] = last
            self._sift_down(0)
        self._ids.discard(top.id)
        return top

    def remove(self, job: Job) -> None:
        """Remove an arbitrary job (linear search for its slot)."""
        if job.id not in self._ids:
            raise KeyError(job.name)
        heap = self._heap
        i = next(i for i, j in enumerate(heap) if j.id == job.id)
        last = heap.pop()
        if i < len(heap):
            heap[i] = last
            self._sift_up(i)
            self._sift_down(i)
        self._ids.discard(job.id)

    def snapshot(self) -> list[Job]:
        """All queued jobs in pop order, without touching the counter."""
        return sorted(self._heap, key=lambda j: j.key)

    def check_invariant(self) -> bool:
        heap = self._heap
        return all(heap[(i - 1) >> 1].key <= heap[i].key for i in range(1, len(heap)))


class DeadlineClassQueueSet:
    """A FIFO queue per registered relative deadline."""

    def __init__(self, classes: Iterable):
        keys = sorted({as_rational(c) for c in classes})
        if not keys:
            raise ValueError("at least one deadline class is required")
        self._queues: dict[Fraction, deque] = {c: deque() for c in keys}
        self._ids: set = set()
        self.comparisons = 0

    @property
    def classes(self) -> tuple:
        return tuple(self._queues)

    @property
    def q(self) -> int:
        return len(self._queues)

    def __len__(self):
        return len(self._ids)

    def __bool__(self):
        return bool(self._ids)

    def __contains__(self, job):
        return job.id in self._ids

    def reset_counter(self):
        self.comparisons = 0

    def insert(self, job: Job) -> None:
        fifo = self._queues.get(job.rel_deadline)
        if fifo is None:
            raise ValueError(f"relative deadline {job.rel_deadline} of job {job.name} "
                             "is not a registered class")
        if job.id in self._ids:
            raise ValueError(f"job {job.name} is already queued")
        if fifo:
            self.comparisons += 1
            if job.key < fifo[-1].key:
                raise ValueError(f"job {job.name} arrives out of deadline order "
                                 f"in class {job.rel_deadline}")
        fifo.append(job)
        self._ids.add(job.id)

    def _earliest_queue(self) -> deque:
        best = None
        for fifo in self._queues.values():
            if not fifo:
                continue
            if best is None:
                best = fifo
                continue
            self.comparisons += 1
            if fifo[0].key < best[0].key:
                best = fifo
        if best is None:
            raise EmptyQueueError("pop from an empty queue set")
        return best

    def peek(self) -> Job:
        return self._earliest_queue()[0]

    def pop_earliest(self) -> Job:
        job = self._earliest_queue().popleft()
        self._ids.discard(job.id)
        return job

    def remove(self, job: Job) -> None:
        if job.id not in self._ids:
            raise KeyError(job.name)
        fifo = self._queues[job.rel_deadline]
        for i, j in enumerate(fifo):
            if j.id == job.id:
                del fifo[i]
                break
        self._ids.discard(job.id)

    def snapshot(self) -> list[Job]:
        return list(heapq.merge(*self._queues.values(), key=lambda j: j.key))

    def check_invariant(self) -> bool:
        for fifo in self._queues.values():
            items = list(fifo)
            if any(a.key > b.key for a, b in zip(items, items[1:])):
                return False
        return True


def make_queue(kind: str, classes=()):
    if kind == "heap":
        return HeapQueue()
    if kind == "class":
        return DeadlineClassQueueSet(classes)
    raise ValueError(f"unknown queue kind {kind!r}")
