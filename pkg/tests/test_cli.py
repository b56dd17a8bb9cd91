from __future__ import annotations

import io
import json
import shutil

import pytest

from deltalang.cli import main, make_generator, parse_bound
from deltalang.transpiler import parse_ir


def run(*argv, env=None):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def fx(fixtures_dir):
    return lambda name: str(fixtures_dir / name)


def test_run_prints_outputs(fx):
    code, out, _ = run("run", fx("sum.delta"), "--in", "n=10")
    assert code == 0 and out == "verdict=true y=55\n"


def test_run_json_and_trace(fx, tmp_path):
    trace = tmp_path / "t.txt"
    code, out, _ = run("run", fx("sum.delta"), "--in", "n=3", "--format", "json", "--trace-json", str(trace))
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] is True and doc["bindings"] == {"y": "6"}
    assert trace.read_text().startswith("<")


def test_false_verdict_exit_3(fx):
    code, out, _ = run("run", fx("falsepred.delta"), "--in", "a=3")
    assert code == 3 and out.startswith("verdict=false")


def test_check(fx):
    assert run("check", fx("sum.delta"))[:2] == (0, f"ok {fx('sum.delta')}\n")
    code, out, _ = run("check", fx("sum.delta"), "--dump-signature")
    assert code == 0 and "tri" in out
    code, _, err = run("check", fx("bad.delta"))
    assert code == 2 and "error[Redeclaration]" in err


def test_parse_error_exit_2(tmp_path):
    p = tmp_path / "x.delta"
    p.write_text("x := ;\n")
    code, _, err = run("check", str(p))
    assert code == 2 and "x.delta:1:" in err


def test_usage_errors():
    assert run()[0] == 1
    assert run("frobnicate")[0] == 1
    assert run("run", "/no/such/file.delta")[0] == 1


def test_bad_input_value(fx):
    code, _, err = run("run", fx("sum.delta"), "--in", "n=<1,")
    assert code == 1 and "bad value" in err
    assert run("run", fx("sum.delta"), "--in", "novalue")[0] == 1
    assert run("run", fx("sum.delta"), "--budget", "0")[0] == 1


def test_runtime_error_exit_4(fx):
    code, _, err = run("run", fx("sum.delta"))
    assert code == 4 and "UnboundVariable" in err


def test_budget_exit_5(fx, monkeypatch):
    assert run("run", fx("sum.delta"), "--in", "n=1000", "--budget", "50")[0] == 5
    monkeypatch.setenv("DELTA_BUDGET", "50")
    assert run("run", fx("sum.delta"), "--in", "n=1000")[0] == 5
    monkeypatch.setenv("DELTA_BUDGET", "1000000")
    assert run("run", fx("sum.delta"), "--in", "n=10")[0] == 0


def test_rank(fx):
    assert run("rank", fx("prog.delta")) == (0, "3\n", "")
    code, out, _ = run("rank", fx("prog.delta"), "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["rank"] == 3 and doc["nodes"]


def test_meter(fx):
    code, out, _ = run("meter", fx("sum.delta"), "--bound", "10,2", "--gen", "n=size")
    assert code == 0 and "fits" in out
    code, out, _ = run("meter", fx("doubling.delta"), "--bound", "10,3", "--gen", "n=size", "--format", "json")
    assert code == 3 and json.loads(out)["verdict"] == "violated"
    assert run("meter", fx("sum.delta"), "--bound", "x")[0] == 1
    assert run("meter", fx("sum.delta"), "--bound", "1,1", "--sizes", "a")[0] == 1


def test_transpile(fx, tmp_path):
    src = tmp_path / "sum.delta"
    shutil.copy(fx("sum.delta"), src)
    code, out, _ = run("transpile", str(src))
    dest = tmp_path / "sum.dir"
    assert code == 0 and out == f"wrote {dest}\n"
    ir = parse_ir(dest.read_text())
    assert [f.name for f in ir.functions] == ["tri"]
    code, out, _ = run("transpile", str(src), "-o", "-")
    assert out == dest.read_text()


def test_trace(fx):
    code, out, _ = run("trace", fx("sum.delta"), "--in", "n=2")
    lines = out.splitlines()
    assert code == 0 and lines[-1].startswith("verdict=true steps=")
    assert all(" rule " in line for line in lines[:-1])
    code, out, _ = run("trace", fx("sum.delta"), "--in", "n=2", "--format", "json")
    docs = [json.loads(line) for line in out.splitlines()[:-1]]
    assert docs and all("rule" in d for d in docs)


def test_generator_kinds():
    gen = make_generator(["n=size", "x=randint", "l=randlist", "w=\"ab\""], seed=1)
    a, b = gen(4), gen(4)
    assert a == b
    d = dict(a)
    assert d["n"] == 4 and 0 <= d["x"] < 16 and len(d["l"]) == 4 and d["w"] == "ab"
    assert parse_bound("3/2,2").C == pytest.approx(1.5)


COMMANDS = [
    ("run", "sum.delta", "--in", "n=10"),
    ("run", "reverse.delta", "--in", "l=<1,2,3,4,5>", "--format", "json"),
    ("check", "parity.delta", "--dump-signature"),
    ("rank", "prog.delta", "--format", "json"),
    ("meter", "sum.delta", "--bound", "10,2", "--gen", "n=size", "--format", "json"),
    ("transpile", "nested.delta", "-o", "-"),
    ("trace", "factorial.delta", "--in", "n=5", "--format", "json"),
]


def cli_is_deterministic(fixtures_dir) -> bool:
    for cmd, name, *rest in COMMANDS:
        argv = [cmd, str(fixtures_dir / name), *rest]
        if run(*argv) != run(*argv):
            return False
    return True


def test_cli_deterministic(fixtures_dir):
    assert cli_is_deterministic(fixtures_dir)
