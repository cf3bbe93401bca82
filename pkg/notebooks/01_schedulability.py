"""Schedulability of a small task set, checked three ways.

Three periodic processes share one processor. We compute their utilization
exactly, ask the analytical test for a verdict, then run EDF over one
hyperperiod and look at what actually happened.
"""
from fractions import Fraction

from efdfsim import Machine, TaskSpec, edf_schedulable_implicit, simulate, utilization
from efdfsim.model import hyperperiod

# %% The task set: (exec, period) rows
tasks = [TaskSpec(1, 1, 8), TaskSpec(2, 2, 5), TaskSpec(3, 4, 10)]
for t in tasks:
    print(f"task {t.id}: C={t.exec} T={t.period} u={t.utilization}")

# %% Utilization is kept as an exact fraction
u = utilization(tasks)
print(f"U = {u} = {float(u):.1%}")
print("schedulable under EDF:", edf_schedulable_implicit(tasks))

# %% Simulate one hyperperiod
H = hyperperiod(tasks)
report = simulate(tasks, Machine([1]), "edf")
print(f"horizon={H} released={report.released} completed={report.completions} "
      f"missed={report.misses}")
print("processor busy time:", report.per_processor_busy[0], "of", H)

# %% The first few scheduling decisions
for d in report.decisions[:6]:
    print(f"t={str(d.time):>4}  running={d.assignment.get(0, '-'):>5}  ready={list(d.eligible)}")

# %% Push the set over the bound by making task 3 heavier
heavy = tasks[:2] + [TaskSpec(3, 6, 10)]
print("U =", utilization(heavy), "->", edf_schedulable_implicit(heavy))
print("misses over one hyperperiod:", simulate(heavy, Machine([1]), "edf").misses)

# %% Speed scales work, not deadlines
for speed in (2, Fraction(1, 2)):
    r = simulate([TaskSpec(1, 6, 20)], Machine([speed]), "edf", horizon=20)
    print(f"6 units on a speed-{speed} processor finish at t={r.jobs['1.0'].finish}")
