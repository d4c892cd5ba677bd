import json

import pytest

from balmod.cli import RunConfig, main, run_suites, suite_tasks


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_expand_gen(capsys):
    code, out, _ = run(capsys, "expand", "gen", "5", "1", "--order", "5")
    assert code == 0
    assert "product expansion" in out and "agrees" in out
    assert out.splitlines()[-1] == "1 + 3*q + 4*q^2 + 2*q^3 + q^4 + 3*q^5 + O(q^6)"


def test_expand_tcore(capsys):
    code, out, _ = run(capsys, "expand", "tcore", "7", "--order", "6")
    assert code == 0 and out.splitlines()[-1] == "1 1 2 3 5 7 11"


def test_expand_bad_index(capsys):
    code, _, err = run(capsys, "expand", "gen", "5", "9")
    assert code != 0 and "error" in err


def test_expand_unknown_symbol(capsys):
    code, _, err = run(capsys, "expand", "symbol", "nope")
    assert code != 0 and "unknown symbol" in err


def test_verify_identities_level7(capsys):
    code, out, _ = run(capsys, "verify", "identities", "--prime", "7")
    assert code == 0
    for anchor in ("eq:10", "eq:70 first", "eq:86", "eq:87"):
        assert any(line.startswith("proved") and f" {anchor} " in line for line in out.splitlines())


def test_structured_output(capsys):
    code, out, _ = run(capsys, "verify", "sf", "--prime", "5", "--output", "structured")
    assert code == 0
    recs = [json.loads(line) for line in out.splitlines()]
    assert len(recs) == 2
    for r in recs:
        assert {"id", "paper_anchor", "status", "order_checked", "sturm_bound"} <= set(r)
        assert r["status"] == "proved"


def test_quick_mode_never_proves_below_bound(capsys):
    code, out, _ = run(capsys, "verify", "sf", "--prime", "19", "--mode", "quick", "--output", "structured")
    assert code == 0
    assert {json.loads(line)["status"] for line in out.splitlines()} == {"checked"}


def test_failure_exit_status(capsys):
    # order 2 is below every Sturm bound at level 13, so full mode must not pass
    code, _, _ = run(capsys, "verify", "sf", "--prime", "13", "--order", "2")
    assert code == 1


def test_dims_gating():
    full = suite_tasks("dims", RunConfig((17, 19), None, "full"))
    long = suite_tasks("dims", RunConfig((17, 19), None, "long"))
    assert ("_task_dims", (19, 3)) not in full and ("_task_dims", (19, 3)) in long


def test_default_order():
    assert RunConfig((7,), None).order_for(7) == 18
    with pytest.raises(ValueError):
        RunConfig((7,), 0)


def test_report_is_sorted_and_parallel_safe(monkeypatch):
    cfg = RunConfig((5, 7), None)
    serial = run_suites(["perm", "gtd1"], cfg, workers=1)
    parallel = run_suites(["perm", "gtd1"], cfg, workers=2)
    assert [v.claim for v in serial] == sorted(v.claim for v in serial)
    assert [v.to_record() for v in serial] == [v.to_record() for v in parallel]
