"""Random task-set generation and the task-set file format.

A task-set file holds one JSON object per line::

    {"id": 1, "exec": 1, "period": 8, "deadline": 8, "phase": 0}
    {"id": 2, "exec": "3/2", "period": 5}

Numeric fields are integers or ``"num/den"`` strings. ``deadline`` defaults
to ``period`` and ``phase`` to 0. Blank lines and lines starting with ``#``
are ignored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .model import TaskSpec, as_rational, check_unique_ids, format_rational

DEFAULT_PERIODS = (2, 4, 5, 8, 10, 20)

# exec values are rounded to multiples of 1/EXEC_DENOMINATOR
EXEC_DENOMINATOR = 10


class TaskSetParseError(ValueError):
    def __init__(self, msg, lineno=None, path=None):
        self.lineno = lineno
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {msg}" if where else msg)


@dataclass(frozen=True)
class GenSpec:
    n_tasks: int
    target_util: Fraction
    period_pool: tuple = DEFAULT_PERIODS
    seed: int = 0
    # None for implicit deadlines, else (lo, hi) bounds on deadline/period
    deadline_ratio: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "target_util", as_rational(self.target_util))
        object.__setattr__(self, "period_pool", tuple(int(p) for p in self.period_pool))
        if self.n_tasks < 1:
            raise ValueError("n_tasks must be at least 1")
        if self.target_util <= 0:
            raise ValueError("target_util must be positive")
        if not self.period_pool or min(self.period_pool) <= 0:
            raise ValueError("period_pool must hold positive integers")


def _round(x: float) -> Fraction:
    return Fraction(round(x * EXEC_DENOMINATOR), EXEC_DENOMINATOR)


def generate(spec: GenSpec, max_tries: int = 100) -> list[TaskSpec]:
    """Draw a task set whose total utilization equals ``spec.target_util``.

    Per-task utilizations are uniform on the simplex. Each exec is rounded
    to a multiple of 1/10 except the last, which absorbs the rounding error
    exactly. Draws that would give a non-positive exec are retried.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.n_tasks
    for _ in range(max_tries):
        shares = rng.dirichlet(np.ones(n))
        periods = [Fraction(int(p)) for p in rng.choice(spec.period_pool, size=n)]
        ratios = None
        if spec.deadline_ratio is not None:
            lo, hi = spec.deadline_ratio
            ratios = rng.uniform(float(lo), float(hi), size=n)
        execs = [_round(float(spec.target_util) * s * float(p))
                 for s, p in zip(shares[:-1], periods[:-1])]
        used = sum((e / p for e, p in zip(execs, periods)), Fraction(0))
        execs.append((spec.target_util - used) * periods[-1])
        if min(execs) <= 0:
            continue
        tasks = []
        for i, (e, p) in enumerate(zip(execs, periods)):
            d = p
            if ratios is not None:
                d = max(_round(ratios[i] * float(p)), Fraction(1, EXEC_DENOMINATOR))
            tasks.append(TaskSpec(i + 1, e, p, d))
        return tasks
    raise ValueError(f"could not draw a task set for {spec} in {max_tries} tries")


def parse_gen(text: str) -> GenSpec:
    """Parse ``"n=5,util=0.9,seed=3"`` (also ``periods=2:4:8``, ``dratio=0.5:1``)."""
    fields = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, value = part.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {part!r}")
        fields[key.strip()] = value.strip()
    unknown = set(fields) - {"n", "util", "seed", "periods", "dratio"}
    if unknown:
        raise ValueError(f"unknown generator fields {sorted(unknown)}")
    if "n" not in fields or "util" not in fields:
        raise ValueError("generator spec needs n= and util=")
    kwargs = dict(n_tasks=int(fields["n"]), target_util=as_rational(fields["util"]),
                  seed=int(fields.get("seed", 0)))
    if "periods" in fields:
        kwargs["period_pool"] = tuple(int(p) for p in fields["periods"].split(":"))
    if "dratio" in fields:
        lo, hi = fields["dratio"].split(":")
        kwargs["deadline_ratio"] = (as_rational(lo), as_rational(hi))
    return GenSpec(**kwargs)


def _encode(x: Fraction):
    return x.numerator if x.denominator == 1 else format_rational(x)


def _decode(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ValueError(f"field {name!r} must be an integer or a 'num/den' string")
    return as_rational(value)


def dumps_taskset(tasks: Iterable[TaskSpec]) -> str:
    lines = []
    for t in tasks:
        rec = {"id": t.id, "exec": _encode(t.exec), "period": _encode(t.period),
               "deadline": _encode(t.rel_deadline), "phase": _encode(t.phase)}
        lines.append(json.dumps(rec))
    return "".join(line + "\n" for line in lines)


def loads_taskset(text: str, path=None) -> list[TaskSpec]:
    tasks = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TaskSetParseError(f"invalid JSON: {exc.msg}", lineno, path) from None
        if not isinstance(rec, dict):
            raise TaskSetParseError("record must be a JSON object", lineno, path)
        try:
            missing = [k for k in ("id", "exec", "period") if k not in rec]
            if missing:
                raise ValueError(f"missing field(s) {missing}")
            extra = set(rec) - {"id", "exec", "period", "deadline", "phase"}
            if extra:
                raise ValueError(f"unknown field(s) {sorted(extra)}")
            if isinstance(rec["id"], bool) or not isinstance(rec["id"], int):
                raise ValueError("field 'id' must be an integer")
            period = _decode(rec["period"], "period")
            tasks.append(TaskSpec(
                rec["id"], _decode(rec["exec"], "exec"), period,
                _decode(rec["deadline"], "deadline") if "deadline" in rec else period,
                _decode(rec["phase"], "phase") if "phase" in rec else 0))
        except (ValueError, ZeroDivisionError) as exc:
            raise TaskSetParseError(str(exc), lineno, path) from None
    try:
        check_unique_ids(tasks)
    except ValueError as exc:
        raise TaskSetParseError(str(exc), path=path) from None
    return tasks


def load_taskset(path) -> list[TaskSpec]:
    with open(path) as fh:
        return loads_taskset(fh.read(), path)


def save_taskset(tasks: Iterable[TaskSpec], path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_taskset(tasks))
