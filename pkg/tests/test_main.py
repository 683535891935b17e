import json
import logging

import pytest

from main import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, build_parser, main, setup_logging

SCENARIO_1 = ["--pi", "-1.5,20", "--vi", "0,-1", "--ai", "0.1,-0.1",
              "--pj", "1.5,0", "--vj", "0,1", "--aj", "-0.1,0.1"]


class TestPair:
    def test_first_order(self, capsys):
        assert main(["pair", *SCENARIO_1, "--order", "1"]) == EXIT_OK
        assert capsys.readouterr().out == "8.00000000\n"

    def test_second_order(self, capsys):
        assert main(["pair", *SCENARIO_1, "--order", "2", "--horizon", "20"]) == EXIT_OK
        assert capsys.readouterr().out == "inf\n"

    def test_missing_vector(self):
        args = [a for a in SCENARIO_1 if a not in ("--vj", "0,1")]
        with pytest.raises(SystemExit) as info:
            main(["pair", *args])
        assert info.value.code == EXIT_USAGE

    def test_bad_config(self):
        with pytest.raises(SystemExit) as info:
            main(["pair", *SCENARIO_1, "--phi", "-1"])
        assert info.value.code == EXIT_USAGE

    def test_help(self, capsys):
        with pytest.raises(SystemExit) as info:
            build_parser().parse_args(["--help"])
        assert info.value.code == EXIT_OK
        assert "scenario" in capsys.readouterr().out


@pytest.mark.parametrize("command", ["pair", "scenario", "evaluate", "dataset"])
def test_subcommand_help(command, capsys):
    with pytest.raises(SystemExit) as info:
        main([command, "--help"])
    assert info.value.code == EXIT_OK
    out = capsys.readouterr().out
    assert f"usage: star-ttc {command}" in out
    assert "--phi" in out


class TestScenario:
    def test_series_to_stdout(self, capsys):
        assert main(["scenario", "--id", "2", "--duration", "1"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "t,ttc1,ttc2"
        assert len(lines) == 12
        t, ttc1, ttc2 = lines[1].split(",")
        assert (t, ttc1) == ("0.00000000", "inf")
        assert float(ttc2) == pytest.approx(8.15, abs=0.05)

    def test_series_to_file(self, tmp_path):
        out = tmp_path / "s4.csv"
        assert main(["scenario", "--id", "4", "--duration", "0.5", "--clearance", "--out", str(out)]) == EXIT_OK
        assert out.read_text(encoding="utf-8").splitlines()[0] == "t,ttc1,ttc2,clearance"

    def test_unknown_id(self, caplog):
        with caplog.at_level(logging.ERROR):
            assert main(["scenario", "--id", "9"]) == EXIT_USAGE
        assert "unknown scenario 9" in caplog.text


class TestEvaluate:
    ARGS = ["evaluate", "--trials", "10", "--seed", "7", "--oracle-dt", "1e-3", "--fast-oracle"]

    def test_repeatable_json(self, capsys):
        assert main(self.ARGS) == EXIT_OK
        first = capsys.readouterr().out
        assert main(self.ARGS) == EXIT_OK
        assert capsys.readouterr().out == first

        summary = json.loads(first)
        assert summary["n_trials"] == 10
        for trial in summary["trials"]:
            if trial["abs_error"] is not None:
                assert trial["abs_error"] <= 1e-3 + 1e-9

    def test_step_table(self, tmp_path):
        out = tmp_path / "steps.csv"
        args = ["evaluate", "--trials", "5", "--fast-oracle", "--compare-steps", "0.1,0.01", "--out", str(out)]
        assert main(args) == EXIT_OK
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "dt,n_finite,mean_abs_error,std_error"
        assert len(lines) == 3


class TestDataset:
    def test_missing_file(self, tmp_path, caplog):
        missing = tmp_path / "nope.csv"
        with caplog.at_level(logging.ERROR):
            assert main(["dataset", "--input", str(missing), "--pair", "a,b"]) == EXIT_FAILURE
        assert str(missing) in caplog.text

    def test_bad_pair(self, tmp_path):
        assert main(["dataset", "--input", str(tmp_path / "x.csv"), "--pair", "a"]) == EXIT_USAGE

    def test_unknown_vehicle(self, tmp_path, caplog):
        path = tmp_path / "tracks.csv"
        path.write_text("vehicle_id,t,x,y,vx,vy\na,0.0,0,0,1,0\na,0.1,0.1,0,1,0\n", encoding="utf-8")
        with caplog.at_level(logging.ERROR):
            assert main(["dataset", "--input", str(path), "--pair", "a,b"]) == EXIT_FAILURE
        assert "no samples for vehicle(s) b" in caplog.text

    def test_series_and_summary(self, tmp_path):
        path = tmp_path / "tracks.csv"
        rows = ["vehicle_id,t,x,y,vx,vy"]
        for k in range(5):
            rows.append(f"a,{k / 10},{k / 10},0,1,0")
            rows.append(f"b,{k / 10},{k / 10},10,1,0")
        path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        out, summary = tmp_path / "ttc.csv", tmp_path / "summary.json"
        args = ["dataset", "--input", str(path), "--pair", "a,b", "--out", str(out), "--summary", str(summary)]
        assert main(args) == EXIT_OK
        assert len(out.read_text(encoding="utf-8").splitlines()) == 6
        assert json.loads(summary.read_text(encoding="utf-8"))["count_below_critical_2d"] == 0


def test_setup_logging_writes_file(tmp_path):
    root = logging.getLogger()
    saved, level = root.handlers[:], root.level
    root.handlers = []
    try:
        setup_logging(str(tmp_path / "logs"))
        logging.getLogger("star").info("hello")
        for handler in root.handlers:
            handler.flush()
        text = (tmp_path / "logs" / "star_ttc.log").read_text(encoding="utf-8")
        assert " - star - INFO - hello" in text
    finally:
        for handler in root.handlers:
            handler.close()
        root.handlers = saved
        root.setLevel(level)
