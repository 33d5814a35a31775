import io
import json
import subprocess
import sys

from finlift.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_lift_true(capsys):
    code, out, _ = run(capsys, "lift", "{} --> {a}", "{a,b} --> {a=b}")
    assert code == 0 and out.strip() == "true"


def test_lift_false_with_witness(capsys):
    code, out, _ = run(capsys, "lift", "--witness", "{} --> {a}", "{a} --> {a,b}")
    assert code == 1
    assert out.startswith("false") and "bottom:" in out


def test_lift_json(capsys):
    code, out, _ = run(capsys, "lift", "--json", "--witness", "{} --> {a}", "{a} --> {a,b}")
    data = json.loads(out)
    assert code == 1 and data["lifts"] is False and set(data["square"]) == {"top", "bottom"}


def test_parse_error_exit_two(capsys):
    code, _, err = run(capsys, "lift", "{bad", "{a}")
    assert code == 2 and "position 4" in err


def test_usage_error(capsys):
    assert run(capsys, "frobnicate")[0] == 2


def test_stdin(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("{} --> {a}\n{a,b} --> {a=b}\n"))
    assert run(capsys, "lift")[0] == 0


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "{c} --> {o->c}")
    assert code == 0
    assert "CLOSED_SUBSPACE: IN" in out and "DENSE_IMAGE: OUT" in out


def test_classify_json(capsys):
    _, out, _ = run(capsys, "classify", "--json", "{a->b} --> {a=b}")
    data = json.loads(out)
    assert data["classes"]["T1_FIBRES"] == "OUT"
    assert data["classes"]["QUOTIENT"] == "IN"
    assert data["classes"]["INDUCED"] == "OUT"
    assert "lrrrl" in data["nodes"]


def test_normalize(capsys):
    code, out, _ = run(capsys, "normalize", "lrl")
    assert code == 0 and out.strip() == "l"


def test_enumerate_labelled(capsys):
    _, out, _ = run(capsys, "enumerate", "spaces", "--n", "4", "--labelled")
    assert out.strip() == "355"


def test_enumerate_maps(capsys):
    _, out, _ = run(capsys, "enumerate", "maps", "--n", "2")
    assert out.strip() == "44"


def test_export_graph(capsys):
    _, out, _ = run(capsys, "export-graph", "--format", "json")
    assert len(json.loads(out)["nodes"]) == 21
    _, dot, _ = run(capsys, "export-graph", "--format", "dot")
    assert dot.startswith("digraph")


def test_verify_edge(capsys):
    code, out, _ = run(capsys, "verify", "root:r", "--max-size", "2")
    assert code == 0 and out.startswith("ok")


def test_verify_json_is_byte_stable(capsys):
    _, a, _ = run(capsys, "verify", "rl:l", "--json", "--no-timing")
    _, b, _ = run(capsys, "verify", "rl:l", "--json", "--no-timing", "--threads", "2")
    assert a == b
    rep = json.loads(a)[0]
    assert set(rep) == {"subject", "bound", "checked", "passed", "failed", "unknown_skipped",
                        "witnesses", "millis", "notes"}


def test_verify_bad_edge(capsys):
    assert run(capsys, "verify", "xyz:q")[0] == 2


def test_verify_failure_exit_three(capsys, monkeypatch):
    from finlift import orbit
    from finlift.orbit import VerifyReport

    def failing(*a, **k):
        return [VerifyReport("fake", 1, checked=1, failed=1)]
    monkeypatch.setattr(orbit, "verify_all", failing)
    assert run(capsys, "verify", "all")[0] == 3


def test_counterexample(capsys):
    code, out, _ = run(capsys, "counterexample", "rr", "{a->b} --> {a=b}")
    assert code == 0 and out.startswith("against")


def test_caps_are_flags(capsys):
    code, _, err = run(capsys, "--square-cap", "1", "lift", "{a->b} --> {a=b}", "{a,b} --> {a=b}")
    assert code == 2 and "cap" in err


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "finlift", "normalize", "rlr"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "r"


def test_caps_do_not_leak(capsys):
    from finlift.limits import limits
    before = limits.square_count
    run(capsys, "--square-cap", "1", "normalize", "l")
    assert limits.square_count == before
