import io
import json

import pytest

from efdfsim.cli import main
from efdfsim.workload import dumps_taskset

THREE_TASKS = ('{"id": 1, "exec": 1, "period": 8}\n'
         '{"id": 2, "exec": 2, "period": 5}\n'
         '{"id": 3, "exec": 4, "period": 10}\n')


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def three_task_file(tmp_path):
    path = tmp_path / "three.jsonl"
    path.write_text(THREE_TASKS)
    return str(path)


def test_check_three_tasks(three_task_file):
    code, out = run("check", "--taskset", three_task_file)
    assert code == 0
    assert out.splitlines()[0] == "U=37/40 (92.5%) schedulable=yes"


def test_check_empty(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    code, out = run("check", "--taskset", str(path))
    assert code == 0
    assert out.startswith("U=0 (0.0%) schedulable=yes")


def test_check_constrained_failure(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text('{"id": 1, "exec": 3, "period": 4, "deadline": 6}\n'
                    '{"id": 2, "exec": 1, "period": 2}\n')
    code, out = run("check", "--taskset", str(path))
    assert code == 1
    assert "test=constrained" in out
    assert "only sufficient" in out


def test_check_unschedulable_implicit(tmp_path):
    path = tmp_path / "u.jsonl"
    path.write_text('{"id": 1, "exec": 3, "period": 5}\n{"id": 2, "exec": 3, "period": 5}\n')
    code, out = run("check", "--taskset", str(path))
    assert code == 1
    assert "schedulable=no" in out


def test_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"id": 1, "exec": 1, "period": 8}\n{"id": 2}\n')
    code, _ = run("check", "--taskset", str(path))
    assert code == 3
    assert ":2:" in capsys.readouterr().err


def test_missing_file_is_input_error(tmp_path):
    assert run("check", "--taskset", str(tmp_path / "nope.jsonl"))[0] == 3


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        run("simulate", "--policy", "rm", "--gen", "n=2,util=1")
    assert info.value.code == 2


def test_simulate_three_tasks(three_task_file, tmp_path):
    trace, metrics = tmp_path / "t.csv", tmp_path / "m.json"
    code, out = run("simulate", "--taskset", three_task_file, "--policy", "edf",
                    "--trace", str(trace), "--metrics", str(metrics))
    assert code == 0
    assert "misses=0" in out and "horizon=40" in out
    assert trace.read_text().startswith("time,processor,job,task,event\n")
    assert json.loads(metrics.read_text())["misses"] == 0


def test_simulate_speed(tmp_path):
    path = tmp_path / "one.jsonl"
    path.write_text('{"id": 1, "exec": 6, "period": 10}\n')
    trace = tmp_path / "t.csv"
    run("simulate", "--taskset", str(path), "--speeds", "2", "--horizon", "10",
        "--trace", str(trace))
    assert "3,0,1.0,1,completion" in trace.read_text().splitlines()


def test_simulate_hard_rejection_exit_code(tmp_path):
    path = tmp_path / "u.jsonl"
    path.write_text('{"id": 1, "exec": 3, "period": 5}\n{"id": 2, "exec": 3, "period": 5}\n')
    code, out = run("simulate", "--taskset", str(path), "--mode", "hard")
    assert code == 1
    assert "rejected tasks: 2" in out


def test_simulate_byte_identical(tmp_path):
    outputs = []
    for i in range(2):
        t, m = tmp_path / f"t{i}.csv", tmp_path / f"m{i}.json"
        run("simulate", "--gen", "n=6,util=2.2", "--seed", "5", "--speeds", "2,1,1",
            "--trace", str(t), "--metrics", str(m))
        outputs.append((t.read_bytes(), m.read_bytes()))
    assert outputs[0] == outputs[1]


def test_compare_sweep_shape(tmp_path):
    csv_path = tmp_path / "sweep.csv"
    code, out = run("compare", "--gen", "n=6,util=1,seed=2", "--sweep", "0.5,0.9,1.2",
                    "--policies", "edf,efdf", "--speeds", "1,1,1,1", "--csv", str(csv_path))
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 1 + 6
    assert lines[0].split()[:2] == ["util", "policy"]
    rows = csv_path.read_text().splitlines()
    assert rows[0] == "util,policy,released,completions,misses,aborts,migrations,preemptions,rejected"
    assert [r.split(",")[:2] for r in rows[1:3]] == [["1/2", "edf"], ["1/2", "efdf"]]


def test_compare_hard_has_rejections(three_task_file):
    code, out = run("compare", "--taskset", three_task_file, "--mode", "hard", "--speeds", "1",
                    "--policies", "edf,efdf,partitioned-ff")
    header = out.splitlines()[0].split()
    assert "rejected" in header
    assert len(out.strip().splitlines()) == 4


def test_compare_parallel_matches_serial():
    args = ("compare", "--gen", "n=5,util=1", "--sweep", "1.5,2.5", "--runs", "2",
            "--speeds", "2,1")
    assert run(*args)[1] == run(*args, "--workers", "2")[1]


def test_compare_sweep_requires_gen(three_task_file):
    assert run("compare", "--taskset", three_task_file, "--sweep", "0.5")[0] == 3


def test_gen_writes_taskset(tmp_path):
    path = tmp_path / "g.jsonl"
    code, _ = run("gen", "--gen", "n=4,util=0.8,seed=3", "-o", str(path))
    assert code == 0
    code, out = run("gen", "--gen", "n=4,util=0.8,seed=3")
    assert out == path.read_text()
    code, out = run("check", "--taskset", str(path))
    assert out.startswith("U=4/5 (80.0%)")


def test_gen_bad_spec():
    assert run("gen", "--gen", "n=4")[0] == 3


def test_bench_queues():
    code, out = run("bench-queues", "--sizes", "10,100,1000", "--pairs", "32")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "queue,n,insert_cmp,pop_cmp,per_op_cmp"
    assert len([l for l in lines if l.startswith("class,")]) == 3
    assert any(l.startswith("# heap:") for l in lines)
