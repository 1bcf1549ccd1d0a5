import csv
import json
import shutil
from pathlib import Path

import pytest

from hartogs.cli import main
from hartogs.errors import ConfigError
from hartogs.scenario import (
    bundled_suite,
    dump_grid,
    load_scenario,
    run_scenario,
    verify_all,
)

DATA = Path(__file__).parent / "data"
SUITE = bundled_suite()
QUICK = ["kugelsatz-roundtrip", "hartogs-outer", "max-min-example"]


def scenario(name):
    return SUITE / f"{name}.json"


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


class TestExitCodes:
    def test_pass_is_zero(self, tmp_path):
        assert main(["run", "--config", str(scenario("kugelsatz-roundtrip")), "--out", str(tmp_path)]) == 0
        report = json.loads((tmp_path / "kugelsatz-roundtrip.json").read_text())
        roundtrip = next(t for t in report["tasks"] if t["type"] == "verify-roundtrip")
        assert roundtrip["check"]["details"]["left_inverse_max_error"] <= 1e-8

    def test_failing_check_is_one(self, tmp_path):
        assert main(["run", "--config", str(DATA / "negative-coincidence.json"), "--out", str(tmp_path)]) == 1

    def test_malformed_is_two_and_writes_nothing(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"spec_version": 1, "scenario_id": ')
        out = tmp_path / "out"
        assert main(["run", "--config", str(bad), "--out", str(out)]) == 2
        assert not out.exists()

    @pytest.mark.parametrize(
        "mutate",
        [
            lambda d: d.update(spec_version=2),
            lambda d: d.pop("omega"),
            lambda d: d.update(function={"id": "no-such-function"}),
            lambda d: d["tasks"].append({"type": "verify-nonsense"}),
            lambda d: d["tasks"].append({"type": "evaluate-point", "points": [[1, 2, 3]]}),
            lambda d: d.update(omega={"kind": "ball", "center": [0, 0], "radius": -1}),
        ],
    )
    def test_schema_errors_are_two(self, tmp_path, mutate):
        data = json.loads(scenario("kugelsatz-roundtrip").read_text())
        mutate(data)
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps(data))
        out = tmp_path / "out"
        assert main(["run", "--config", str(cfg), "--out", str(out)]) == 2
        assert not out.exists()

    def test_numeric_failure_is_three(self, tmp_path):
        assert main(["run", "--config", str(scenario("kugelsatz-roundtrip")), "--out", str(tmp_path), "--nodes", "64"]) == 3
        report = json.loads((tmp_path / "kugelsatz-roundtrip.json").read_text())
        assert report["errors"] and report["errors"][0]["error"] == "NotConverged"

    def test_unknown_subcommand_is_two(self):
        assert main(["frobnicate"]) == 2


class TestRun:
    def test_sphere_report(self, tmp_path):
        outcome = run_scenario(scenario("sphere-counterexample"), tmp_path)
        assert outcome.status == 0
        report = json.loads((tmp_path / "sphere-counterexample.json").read_text())
        point_rows = read_csv(tmp_path / "sphere-counterexample-task00-evaluate-point.csv")
        assert abs(float(point_rows[0]["value_re"])) <= 1e-8
        roundtrip = next(t for t in report["tasks"] if t["type"] == "verify-roundtrip")
        assert roundtrip["check"]["details"]["counterexample"]["deviation"] == pytest.approx(1.0, abs=1e-8)
        topo = next(t for t in report["tasks"] if t["type"] == "topology-report")
        assert {r["complement-k"] for r in topo["check"]["details"]["resolutions"].values()} == {2}

    def test_one_csv_per_task(self, tmp_path):
        outcome = run_scenario(scenario("kugelsatz-roundtrip"), tmp_path)
        cfg = json.loads(scenario("kugelsatz-roundtrip").read_text())
        assert len([f for f in outcome.files if f.endswith(".csv")]) == len(cfg["tasks"])

    def test_byte_identical(self, tmp_path):
        for name in ("a", "b"):
            run_scenario(scenario("sphere-counterexample"), tmp_path / name)
        for f in (tmp_path / "a").iterdir():
            assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()

    def test_seed_recorded_and_overridable(self, tmp_path):
        run_scenario(scenario("max-min-example"), tmp_path, {"seed": 7})
        assert json.loads((tmp_path / "max-min-example.json").read_text())["seed"] == 7

    def test_load_rejects_non_object(self, tmp_path):
        cfg = tmp_path / "x.json"
        cfg.write_text("[1, 2]")
        with pytest.raises(ConfigError):
            load_scenario(cfg)


class TestVerifyAll:
    @pytest.fixture
    def quick_suite(self, tmp_path):
        suite = tmp_path / "suite"
        suite.mkdir()
        for name in QUICK:
            shutil.copy(scenario(name), suite)
        return suite

    def test_all_pass(self, quick_suite, tmp_path):
        status, outcomes = verify_all(quick_suite, tmp_path / "out")
        assert status == 0 and len(outcomes) == len(QUICK)
        rows = read_csv(tmp_path / "out" / "summary.csv")
        assert rows and all(r["pass"] == "true" for r in rows)

    def test_one_negative_control(self, quick_suite, tmp_path):
        shutil.copy(DATA / "negative-coincidence.json", quick_suite)
        assert main(["verify-all", "--config", str(quick_suite), "--out", str(tmp_path / "out")]) == 1
        failing = [r for r in read_csv(tmp_path / "out" / "summary.csv") if r["pass"] != "true"]
        assert [(r["scenario_id"], r["check_id"]) for r in failing] == [("negative-coincidence", "coincidence")]

    def test_worst_status_wins(self, quick_suite, tmp_path):
        shutil.copy(DATA / "negative-coincidence.json", quick_suite)
        (quick_suite / "zz-bad.json").write_text("{}")
        status, _ = verify_all(quick_suite, tmp_path / "out")
        assert status == 2

    def test_empty_dir(self, tmp_path):
        (tmp_path / "empty").mkdir()
        assert main(["verify-all", "--config", str(tmp_path / "empty"), "--out", str(tmp_path / "out")]) == 2

    def test_parallel_matches_sequential(self, quick_suite, tmp_path):
        verify_all(quick_suite, tmp_path / "seq")
        verify_all(quick_suite, tmp_path / "par", parallel=2)
        for f in sorted((tmp_path / "seq").rglob("*")):
            if f.is_file():
                assert f.read_bytes() == (tmp_path / "par" / f.relative_to(tmp_path / "seq")).read_bytes()


class TestGrid:
    def test_sphere_slice_columns(self, tmp_path):
        out = tmp_path / "grid.csv"
        assert main(["grid", "--config", str(scenario("sphere-counterexample")), "--out", str(out)]) == 0
        rows = read_csv(out)
        assert list(rows[0]) == ["re", "im", "in_omega", "companion_re", "companion_im", "reference_re", "reference_im", "abs_err"]
        inside = [r for r in rows if r["in_omega"] == "true"]
        outside = [r for r in rows if r["in_omega"] == "false"]
        assert inside and outside
        assert all(r["companion_re"] == "" for r in outside)
        assert max(float(r["abs_err"]) for r in inside) <= 1e-8

    def test_constant_column(self, tmp_path):
        out = tmp_path / "grid.csv"
        assert dump_grid(DATA / "constant-grid.json", out) == 0
        vals = {(r["companion_re"], r["companion_im"]) for r in read_csv(out) if r["in_omega"] == "true"}
        assert vals == {("2", "1")}

    def test_scientific_small_numbers(self, tmp_path):
        out = tmp_path / "grid.csv"
        dump_grid(scenario("sphere-counterexample"), out)
        errs = [r["abs_err"] for r in read_csv(out) if r["abs_err"] not in ("", "0")]
        assert errs and all("e-" in v for v in errs)


def test_catalog_list(capsys):
    assert main(["catalog-list"]) == 0
    assert "sphere-piecewise" in capsys.readouterr().out


def test_bundled_suite_passes(tmp_path):
    status, outcomes = verify_all(SUITE, tmp_path)
    assert status == 0, [(o.scenario_id, o.status, o.error) for o in outcomes if o.status]
    assert json.loads((tmp_path / "summary.json").read_text())["status"] == 0
