import json

import pytest

from bcov33.cli import RunConfig, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestConfig:
    def test_defaults(self):
        cfg = RunConfig()
        assert cfg.order == 12 and cfg.guard == 64

    @pytest.mark.parametrize("kw", [{"order": 3}, {"guard": 8}, {"threads": 0}])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            RunConfig(**kw)

    def test_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"order": 6}))
        code, out, _ = run(capsys, "gw", "--config", str(cfg))
        assert code == 0 and json.loads(out)["order"] == 6
        code, out, _ = run(capsys, "gw", "--config", str(cfg), "--order", "7")
        assert json.loads(out)["order"] == 7

    def test_unknown_key(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"colour": "blue"}))
        assert run(capsys, "gw", "--config", str(cfg))[0] == 2


class TestFan:
    def test_check(self, capsys):
        code, out, _ = run(capsys, "fan", "check")
        assert code == 0
        assert "110 rays, 1458 maximal cones" in out

    def test_build_stdout(self, capsys):
        code, out, _ = run(capsys, "fan", "build", "--out", "-")
        data = json.loads(out)
        assert code == 0 and len(data["rays"]) == 110 and len(data["maximal_cones"]) == 1458

    def test_round_trip_and_corruption(self, tmp_path, capsys):
        path = tmp_path / "fan.json"
        assert run(capsys, "fan", "build", "--out", str(path))[0] == 0
        assert run(capsys, "fan", "check", "--in", str(path))[0] == 0
        data = json.loads(path.read_text())
        del data["rays"][17]
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(data))
        assert run(capsys, "fan", "check", "--in", str(bad))[0] == 1

    def test_dropped_cone_fails(self, tmp_path, capsys):
        data = json.loads(run(capsys, "fan", "build")[1])
        data["maximal_cones"].pop()
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(data))
        code, out, _ = run(capsys, "fan", "check", "--in", str(bad), "--json")
        assert code == 1 and json.loads(out)["status"] == "FAIL"

    def test_missing_file(self, capsys):
        assert run(capsys, "fan", "check", "--in", "/nonexistent/fan.json")[0] == 2


class TestStages:
    def test_series(self, capsys):
        code, out, _ = run(capsys, "series", "--order", "8")
        data = json.loads(out)
        assert code == 0 and all(data["checks"].values())
        assert data["I0"][0]["0"][:3] == ["1", "36", "8100"]

    def test_gw_stability(self, capsys):
        a = json.loads(run(capsys, "gw", "--order", "6")[1])
        b = json.loads(run(capsys, "gw", "--order", "10")[1])
        assert a["N1_0"] == "-9/4"
        for d in "1234":
            assert a["N1"][d] == b["N1"][d]

    def test_deterministic(self, capsys):
        assert run(capsys, "gw", "--order", "8")[1] == run(capsys, "gw", "--order", "8")[1]

    def test_bad_order(self, capsys):
        assert run(capsys, "series", "--order", "2")[0] == 2


@pytest.mark.slow
class TestFullRuns:
    def test_chi_top(self, capsys):
        code, out, _ = run(capsys, "chi", "top")
        assert code == 0 and json.loads(out)["total"] == 192

    def test_verify_all(self, tmp_path, capsys):
        path = tmp_path / "report.json"
        code, _, _ = run(capsys, "verify", "all", "--order", "12", "--out", str(path))
        report = json.loads(path.read_text())
        assert code == 0
        assert report["status"] == "PASS"
        assert report["values"]["phi_divisor"] == {"0": "-68", "mu6": "7/3", "inf": "54"}
