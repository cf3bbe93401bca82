import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from efdfsim import (Machine, TaskSpec, efdf_assign, global_edf_assign, partition_first_fit,
                     partitioned_assign)

from conftest import make_job


def brute_force_edf(jobs, machine):
    """Enumerate every partial injective assignment and keep those obeying
    the uniform-machine rules: no idle processor while a job waits, busy
    processors are the fastest ones, earlier deadlines on faster processors."""
    m, n = machine.m, len(jobs)
    legal = []
    for used in range(min(m, n) + 1):
        for chosen in itertools.permutations(jobs, used):
            assign = dict(enumerate(chosen))
            if used < min(m, n):
                continue
            waiting = [j for j in jobs if j not in chosen]
            if any(w.key < c.key for w in waiting for c in chosen):
                continue
            if any(assign[a].key > assign[b].key for a in assign for b in assign
                   if machine.speeds[a] > machine.speeds[b] or (a < b and machine.speeds[a] == machine.speeds[b])):
                continue
            legal.append({cpu: j.id for cpu, j in assign.items()})
    return legal


def test_edf_fast_processor_gets_earliest():
    jobs = [make_job(2, 8, 1), make_job(1, 5, 1)]
    dec = global_edf_assign(jobs, Machine([2, 1]), 0)
    assert dec.assignment == {0: (1, 0), 1: (2, 0)}


def test_edf_single_job_on_fastest():
    dec = global_edf_assign([make_job(1, 5, 1)], Machine([3, 2, 1]), 0)
    assert dec.assignment == {0: (1, 0)}


def test_edf_four_jobs_two_processors():
    jobs = [make_job(4, 9, 1), make_job(3, 6, 1), make_job(2, 6, 1), make_job(1, 12, 1)]
    machine = Machine([1, 1])
    legal = brute_force_edf(jobs, machine)
    assert legal == [{0: (2, 0), 1: (3, 0)}]
    assert global_edf_assign(jobs, machine, 0).assignment == legal[0]


@given(st.lists(st.integers(1, 30), min_size=0, max_size=5, unique=True),
       st.lists(st.sampled_from([Fraction(1, 2), 1, 2, 3]), min_size=1, max_size=3))
def test_edf_matches_brute_force(deadlines, speeds):
    jobs = [make_job(i, d, 1) for i, d in enumerate(deadlines)]
    machine = Machine(sorted(speeds, reverse=True))
    dec = global_edf_assign(jobs, machine, 0)
    assert dec.assignment in brute_force_edf(jobs, machine)


def test_efdf_keeps_affinity_over_speed():
    j1 = make_job(1, 5, 1, last_cpu=1)
    j2 = make_job(2, 8, 1, last_cpu=0)
    machine = Machine([2, 1])
    dec = efdf_assign([j1, j2], machine, 0)
    assert dec.assignment == {0: j2.id, 1: j1.id}
    # global EDF moves both
    assert global_edf_assign([j1, j2], machine, 0).assignment == {0: j1.id, 1: j2.id}


def test_efdf_all_infeasible_without_set_b():
    jobs = [make_job(1, 2, 5), make_job(2, 3, 9)]
    dec = efdf_assign(jobs, Machine([1, 1]), 0, run_set_b=False)
    assert dec.assignment == {}
    assert dec.aborted == {(1, 0), (2, 0)}
    assert dec.split.k == 0


def test_efdf_runs_set_b_on_spare_processor():
    a = make_job(1, 10, 2, last_cpu=1)
    b = make_job(2, 3, 9)
    dec = efdf_assign([a, b], Machine([1, 1]), 0, run_set_b=True)
    # only one slot for A; the affinity tag to cpu 1 lies outside it
    assert dec.assignment == {0: a.id, 1: b.id}
    assert dec.aborted == frozenset()


def test_efdf_pin_conflict_goes_to_earlier_deadline():
    j1 = make_job(1, 5, 1, last_cpu=0)
    j2 = make_job(2, 7, 1, last_cpu=0)
    j3 = make_job(3, 9, 1, last_cpu=1)
    dec = efdf_assign([j1, j2, j3], Machine([1, 1, 1]), 0)
    assert dec.assignment == {0: j1.id, 1: j3.id, 2: j2.id}


def test_efdf_only_top_jobs_keep_affinity():
    j1 = make_job(1, 5, 1)
    j2 = make_job(2, 6, 1)
    j3 = make_job(3, 9, 1, last_cpu=0)
    dec = efdf_assign([j1, j2, j3], Machine([1, 1]), 0)
    assert dec.assignment == {0: j1.id, 1: j2.id}


def test_efdf_explicit_affinity_map():
    j1 = make_job(1, 5, 1)
    j2 = make_job(2, 8, 1)
    dec = efdf_assign([j1, j2], Machine([1, 1]), 0, affinity={j1.id: 1})
    assert dec.assignment == {0: j2.id, 1: j1.id}


def test_efdf_forced_infeasible():
    j1 = make_job(1, 5, 1)
    j2 = make_job(2, 8, 1)
    dec = efdf_assign([j1, j2], Machine([1, 1]), 0, forced_infeasible={j1.id})
    assert [j.id for j in dec.split.set_b] == [j1.id]
    assert dec.aborted == {j1.id}


@given(st.lists(st.tuples(st.integers(5, 40), st.integers(1, 4)), max_size=6,
                unique_by=lambda t: t[0]),
       st.lists(st.sampled_from([1, 2, 3]), min_size=1, max_size=4))
def test_efdf_without_affinity_equals_edf(params, speeds):
    jobs = [make_job(i, d, r) for i, (d, r) in enumerate(params)]
    machine = Machine(sorted(speeds, reverse=True))
    assert efdf_assign(jobs, machine, 0, run_set_b=True).assignment == \
        global_edf_assign(jobs, machine, 0).assignment


@given(st.lists(st.tuples(st.integers(1, 30), st.integers(1, 20),
                          st.one_of(st.none(), st.integers(0, 3))), max_size=8),
       st.integers(1, 4), st.booleans(), st.integers(0, 5))
def test_efdf_structure(params, m, run_b, now):
    jobs = [make_job(i, d, r, last_cpu=c) for i, (d, r, c) in enumerate(params)]
    machine = Machine([1] * m)
    dec = efdf_assign(jobs, machine, now, run_set_b=run_b)
    ids = list(dec.assignment.values())
    assert len(ids) == len(set(ids))
    eligible = len(jobs) if run_b else dec.split.k
    # work conserving on the fastest processors
    assert sorted(dec.assignment) == list(range(min(eligible, m)))
    assert dec == efdf_assign(jobs, machine, now, run_set_b=run_b)
    top = {j.id for j in dec.split.set_a[:min(dec.split.k, m)]}
    assert top <= set(ids)


def test_partition_overflow():
    tasks = [TaskSpec(i, 3, 5) for i in range(3)]
    part = partition_first_fit(tasks, 2)
    assert len(part.mapping) == 2 and len(part.rejected) == 1


def test_partition_single_task():
    assert partition_first_fit([TaskSpec(7, 1, 2)], 3).mapping == {7: 0}


def test_partition_halves():
    tasks = [TaskSpec(i, 1, 2) for i in range(4)]
    part = partition_first_fit(tasks, 2)
    assert part.mapping == {0: 0, 1: 0, 2: 1, 3: 1}
    assert part.rejected == ()
    assert part.load == (1, 1)


def test_partition_uses_speed_as_capacity():
    tasks = [TaskSpec(1, 3, 2), TaskSpec(2, 1, 2)]
    part = partition_first_fit(tasks, Machine([2, 1]))
    assert part.mapping == {1: 0, 2: 0}


def test_partitioned_assign_per_processor_edf():
    tasks = [TaskSpec(1, 1, 4), TaskSpec(2, 1, 4), TaskSpec(3, 1, 4)]
    part = partition_first_fit(tasks, 2)
    jobs = [make_job(1, 9, 1), make_job(2, 4, 1), make_job(3, 6, 1)]
    dec = partitioned_assign(jobs, Machine([1, 1]), part)
    cpu_of = part.mapping
    for cpu, jid in dec.assignment.items():
        mine = [j for j in jobs if cpu_of[j.task_id] == cpu]
        assert jid == min(mine, key=lambda j: j.key).id
