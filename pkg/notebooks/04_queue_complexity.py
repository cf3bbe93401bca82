"""Two ways to keep the ready queue in deadline order.

A binary heap costs about log2(n) comparisons per operation. If tasks come
in a handful of relative-deadline classes, one FIFO per class stays sorted
on its own (jobs of a class arrive in deadline order), and finding the
earliest job only means looking at q queue heads.
"""
import numpy as np

from efdfsim.bench import bench_queues, fit_log2

# %% Comparison counts at growing queue sizes
sizes = (16, 128, 1024, 8192)
costs = bench_queues(sizes=sizes, q=4)
print(f"{'queue':>6} {'n':>6} {'insert':>8} {'pop':>8} {'per op':>8}")
for c in costs:
    print(f"{c.kind:>6} {c.n:>6} {c.insert:8.2f} {c.pop:8.2f} {c.per_op:8.2f}")

# %% The heap grows with log2 n, the class queues do not grow at all
a, b = fit_log2([c for c in costs if c.kind == "heap"])
print(f"heap per-op ~ {a:.2f} * log2(n) {b:+.2f}")
flat = [c.per_op for c in costs if c.kind == "class"]
print("class per-op spread:", np.ptp(flat))

# %% The class cost does depend on how many classes there are
for q in (2, 4, 8, 16):
    (c,) = [x for x in bench_queues(sizes=(1024,), q=q) if x.kind == "class"]
    print(f"q={q:>2}: per-op {c.per_op:.2f}")
