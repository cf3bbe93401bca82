"""Behaviour when the processor is overloaded.

At U = 1.5 on one processor some deadlines must be missed. EDF keeps
running jobs that can no longer finish and lets them drag others down.
EFDF demotes a job whose laxity has gone negative, so the time goes to
jobs that can still make it.
"""
import numpy as np

from efdfsim import Machine, TaskSpec, simulate
from efdfsim.workload import GenSpec, generate

# %% Mean completions over random overloaded sets
done = {"edf": [], "efdf": []}
for seed in range(40):
    tasks = generate(GenSpec(5, "1.5", seed=seed))
    for policy in done:
        done[policy].append(simulate(tasks, Machine([1]), policy, "soft").completions)
for policy, xs in done.items():
    print(f"{policy:>5}: mean completions {np.mean(xs):.2f}")

# %% A laxity expiry, step by step
# Two light jobs take both processors at t=0. The heavy job needs 11/2 of
# its 6 time units, so its slack of 1/2 runs out at t=1/2.
tasks = [TaskSpec(1, 1, 5), TaskSpec(2, 1, 5), TaskSpec(3, "11/2", 6)]
for mode in ("hard", "soft"):
    r = simulate(tasks, Machine([1, 1]), "efdf", mode, horizon=6)
    print(f"--- efdf {mode}: completions={r.completions} aborts={r.aborts} misses={r.misses}")
    for rec in r.trace:
        if rec.job and rec.job.startswith("3."):
            print("  ", rec.row())

# %% Hard mode also refuses task sets that exceed the machine's capacity
tasks = [TaskSpec(1, 3, 5), TaskSpec(2, 3, 5), TaskSpec(3, 1, 5)]
r = simulate(tasks, Machine([1]), "edf", "hard")
print("rejected task ids:", r.rejected, "misses:", r.misses)
