import json

import pytest

from toeplitz_claw import theorems as th
from toeplitz_claw import verify
from toeplitz_claw.core import ToeplitzParams, validate_params
from toeplitz_claw.verify import SweepSpec, cells, eval_bound, run_sweep


def test_eval_bound():
    env = {"k": 3, "t1": 2, "tk": 7, "tkm1": 5}
    assert eval_bound("min(40, 2*(t1+tk))", env) == 18
    assert eval_bound("tkm1+tk+1", env) == 13
    assert eval_bound("(k+2)*t1", env) == 10
    assert eval_bound("tk//2", env) == 3
    for bad in ["__import__('os')", "t1 ** 2", "x + 1", "open('f')"]:
        with pytest.raises(ValueError):
            eval_bound(bad, env)


def test_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(checks=("nonsense",))
    with pytest.raises(ValueError):
        SweepSpec(checks=())
    with pytest.raises(ValueError):
        SweepSpec(family="primes")
    with pytest.raises(ValueError):
        SweepSpec(k_values=())


def test_cells_sorted_and_complete():
    spec = SweepSpec(k_values=(3, 2), t_max=5, n_max="8")
    box = cells(spec)
    assert box == sorted(box, key=verify.cell_key)
    expected = 0
    for k, count in ((2, None), (3, None)):
        from itertools import combinations

        for offs in combinations(range(1, 6), k):
            expected += max(0, 8 - offs[-1])
    assert len(box) == expected
    assert all(validate_params(p.n, p.offsets) == p for p in box)


def test_k2_box_has_no_discrepancies():
    spec = SweepSpec((2,), 10, "tk+1", "2*(t1+tk)", checks=("claw",))
    report = run_sweep(spec)
    assert report.ok and report.cells_evaluated == report.cells_total > 0


def test_fibonacci_family():
    report = run_sweep(SweepSpec(family="fibonacci", checks=("fibonacci",)))
    assert report.ok and report.check_counts == {"fibonacci": 8}
    assert [r.params.k for r in report.results] == list(range(1, 9))


def test_catalogue_box():
    report = run_sweep(SweepSpec((3,), 12, "2*tk-3", "2*tk-1", checks=("catalogue37",)))
    assert report.ok and report.check_counts["catalogue37"] > 0


def test_determinism_and_workers():
    spec = SweepSpec((2, 3), 7, "tk+1", "16", checks=("claw", "chordal", "line"))
    a = [json.dumps(r, sort_keys=True) for r in run_sweep(spec).records(include_cells=True)]
    b = [json.dumps(r, sort_keys=True) for r in run_sweep(spec).records(include_cells=True)]
    c = [json.dumps(r, sort_keys=True) for r in run_sweep(spec, workers=2).records(include_cells=True)]
    assert a == b == c


def test_skipped_cells_are_recorded(monkeypatch):
    monkeypatch.setenv("TOEPLITZ_ORACLE_MAX_N", "12")
    spec = SweepSpec((2,), 4, "tk+1", "16", checks=("claw",))
    report = run_sweep(spec)
    assert report.skipped and all(p.n > 12 for p, _, _ in report.skipped)
    assert report.cells_evaluated + len(report.skipped) == report.cells_total == len(cells(spec))
    kinds = [r["record"] for r in report.records()]
    assert kinds.count("skipped") == len(report.skipped) and kinds[-1] == "summary"


def test_discrepancy_is_reported(monkeypatch):
    def always_claw_free(p, witness=False, bound=None):
        return th.ClawFreeVerdict(True, th.ClawRule.ORACLE)

    monkeypatch.setattr(th, "classify_claw_free", always_claw_free)
    report = run_sweep(SweepSpec((2,), 4, "tk+1", "10", checks=("claw",)))
    assert not report.ok
    d = report.discrepancies[0]
    assert d.check == "claw" and d.theorem_verdict is True and d.oracle_verdict is False
    assert d.witness is not None
    rec = d.as_record()
    assert set(rec) == {"record", "params", "check", "theorem_verdict", "oracle_verdict", "witness", "detail"}


@pytest.mark.parametrize(
    "n, offsets, rule, claw_free",
    [
        (8, (1, 2, 3, 5), "SumBoundaryK4", True),
        (30, (5, 10, 15), "Cocoonery", True),
        (9, (1, 2, 3, 5, 8), "OracleFallback", True),
    ],
)
def test_explain(n, offsets, rule, claw_free):
    trace = verify.explain(ToeplitzParams(n, offsets))
    assert trace["final_rule"] == rule == trace["steps"][-1]["rule"]
    assert trace["verdict"]["claw_free"] is claw_free
    assert trace["oracle"] == {"claw_free": claw_free, "agrees": True}
    assert all({"rule", "premise", "holds"} <= set(s) for s in trace["steps"])


def test_explain_beyond_bound():
    trace = verify.explain(ToeplitzParams(700, (100, 200, 300, 400, 600)))
    assert trace["verdict"] is None and "error" in trace


def test_suite_names():
    assert len(verify.suite_specs("acceptance")) == sum(len(g) for g in verify.ACCEPTANCE_SUITE.values())
    assert [s.name for s in verify.suite_specs("k3")] == ["k3", "k3-boundary"]
    with pytest.raises(ValueError):
        verify.suite_specs("nope")
