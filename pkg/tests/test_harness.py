import csv
import io
import json

import pytest

from ffgcd.harness import SUITES, InstanceSpec, dumps, report_csv, run_suite, write_report
from ffgcd.harness.suites import dth_power_oracle, exhaustive_relation, resolve_params
from ffgcd.harness.verdicts import BRANCHES, STATUSES, parse_num
from ffgcd import RationalFunction

K = RationalFunction.parse
QUICK = {"refinement": 3, "gcd-two-units": 3, "gcd-units": 4, "s-part": 4}


@pytest.mark.parametrize("name", sorted(SUITES))
def test_every_suite_runs_clean(name):
    rep = run_suite(InstanceSpec(name, 7, QUICK.get(name, 6)))
    assert not rep["finding"], [v for v in rep["verdicts"] if v["status"] == "FINDING"]
    for v in rep["verdicts"]:
        assert v["branch"] in BRANCHES and v["status"] in STATUSES
        if v["lhs"] is not None and v["rhs"] is not None:
            assert parse_num(v["margin"]) == parse_num(v["rhs"]) - parse_num(v["lhs"])


@pytest.mark.parametrize("name", ["brownawell", "derivative-gcd", "dth-power-count", "gcd-powers", "pisot"])
def test_verdicts_recompute_from_serialized_instance(name):
    spec = InstanceSpec(name, 3, 5)
    rep = json.loads(dumps(run_suite(spec)))
    s = SUITES[name]
    prm = resolve_params(s, spec.params)
    for v in rep["verdicts"]:
        again = s.verify(v["instance"], prm, v["id"]).to_dict()
        assert (again["lhs"], again["rhs"], again["status"]) == (v["lhs"], v["rhs"], v["status"])


def test_determinism_is_byte_identical():
    a = dumps(run_suite(InstanceSpec("gcd-powers", 11, 8)))
    b = dumps(run_suite(InstanceSpec("gcd-powers", 11, 8)))
    assert a == b
    c = dumps(run_suite(InstanceSpec("gcd-powers", 12, 8)))
    assert a != c


def test_empty_suite():
    rep = run_suite(InstanceSpec("brownawell", 1, 0))
    assert rep["verdicts"] == [] and not rep["finding"]
    assert sum(rep["summary"].values()) == 0


def test_caps_exceeded_is_not_a_finding():
    rep = run_suite(InstanceSpec("gcd-units", 1, 5, {"max_m": "1"}))
    assert rep["summary"]["cap-exceeded"] == 5 and not rep["finding"]


def test_unknown_suite_and_parameter():
    with pytest.raises(ValueError):
        run_suite(InstanceSpec("nope", 1, 1))
    with pytest.raises(ValueError):
        run_suite(InstanceSpec("brownawell", 1, 1, {"bogus": "1"}))


def test_report_files(tmp_path):
    rep = run_suite(InstanceSpec("divisor-degree", 2, 4))
    out, csv_path = tmp_path / "r.json", tmp_path / "r.csv"
    write_report(rep, str(out), str(csv_path))
    assert json.loads(out.read_text()) == json.loads(dumps(rep))
    rows = list(csv.DictReader(io.StringIO(csv_path.read_text())))
    assert len(rows) == 4 and all(r["status"] == "pass" for r in rows)
    assert report_csv(rep) == csv_path.read_text()


def test_oracles():
    assert dth_power_oracle(K("4*(t^2+1)^2/(t-3)^4"), 2)
    assert not dth_power_oracle(K("(t^2+1)^2*(t-3)"), 2)
    assert exhaustive_relation([K("t"), K("t^2")], 3) is not None
    assert exhaustive_relation([K("t"), K("t+1")], 6) is None
