import io
import json
import math
import re

import pytest

from octads.cli import main, write_records


def run_cli(args, tmp_path, name="out.csv"):
    out = tmp_path / name
    code = main(args + ["--output", str(out)])
    return code, out.read_bytes()


class TestWriteRecords:
    def test_empty_rows_header_only(self):
        buf = io.StringIO()
        write_records([], ["a", "b"], "csv", buf)
        assert buf.getvalue() == "a,b\n"

    def test_float_formatting(self):
        buf = io.StringIO()
        write_records([{"x": 1.0, "n": 3, "s": "ok"}], ["x", "n", "s"], "csv", buf)
        assert buf.getvalue() == "x,n,s\n1.000000000000e+00,3,ok\n"

    def test_json_is_valid_and_matches_fields(self):
        buf = io.StringIO()
        write_records([{"x": 0.5, "n": 2}], ["x", "n"], "json", buf)
        data = json.loads(buf.getvalue())
        assert data == [{"x": 0.5, "n": 2}]


class TestEval:
    def test_single_rep_row_shape(self, tmp_path):
        code, payload = run_cli(
            ["eval", "--t", "1", "--r", "0,0.5", "--eta", "0", "--rep", "1"], tmp_path)
        assert code == 0
        lines = payload.decode().splitlines()
        assert lines[0] == "t,r,eta,value,est_error,m_used,u_max_used"
        assert len(lines) == 3
        assert re.match(r"^1\.000000000000e\+00,0\.000000000000e\+00,", lines[1])

    def test_byte_identical_runs(self, tmp_path):
        args = ["eval", "--t", "0.5", "--r", "0,1", "--eta", "0.7853981634", "--rep", "both"]
        _, a = run_cli(args, tmp_path, "a.csv")
        _, b = run_cli(args, tmp_path, "b.csv")
        assert a == b

    def test_workers_match_serial(self, tmp_path):
        args = ["eval", "--t", "1", "--r", "0,0.5,1", "--eta", "0,1.2", "--rep", "1"]
        _, serial = run_cli(args, tmp_path, "serial.csv")
        _, parallel = run_cli(args + ["--workers", "2"], tmp_path, "par.csv")
        assert serial == parallel

    def test_json_format(self, tmp_path):
        code, payload = run_cli(
            ["eval", "--t", "1", "--r", "0", "--eta", "0", "--rep", "1", "--format", "json"],
            tmp_path, "out.json")
        assert code == 0
        rows = json.loads(payload.decode())
        assert list(rows[0].keys()) == ["t", "r", "eta", "value", "est_error", "m_used", "u_max_used"]


class TestCompareReps:
    def test_small_grid_passes(self, tmp_path):
        code, payload = run_cli(
            ["compare-reps", "--t", "1", "--r", "0,1", "--eta", "0,2.356194490192345"],
            tmp_path)
        assert code == 0
        header = payload.decode().splitlines()[0]
        assert header.endswith("rel_diff")

    def test_absurd_threshold_fails(self, tmp_path):
        code, _ = run_cli(
            ["compare-reps", "--t", "1", "--r", "0.5", "--eta", "0", "--threshold", "1e-16"],
            tmp_path)
        assert code == 1

    def test_rep2_paths(self, tmp_path):
        code, _ = run_cli(
            ["compare-reps", "--what", "rep2-paths", "--t", "1", "--r", "0.5",
             "--eta", "0.7853981634", "--threshold", "1e-8"], tmp_path)
        assert code == 0


class TestOtherCommands:
    def test_residual_single_point(self, tmp_path):
        code, payload = run_cli(
            ["residual", "--t", "1", "--r", "0.5", "--eta", "1.5707963268", "--which", "rep1"],
            tmp_path)
        assert code == 0
        assert "pass" in payload.decode()

    def test_hyperbolic_dump_terms(self, tmp_path):
        code, payload = run_cli(["hyperbolic", "--n", "3", "--dump-terms"], tmp_path, "terms.txt")
        assert code == 0
        assert payload.decode() == "1/2/t,1,1,0\n"

    def test_hyperbolic_values(self, tmp_path):
        code, payload = run_cli(["hyperbolic", "--n", "3", "--t", "1", "--s", "1"], tmp_path)
        assert code == 0
        value = float(payload.decode().splitlines()[1].split(",")[3])
        ref = math.exp(-1.0) / (4.0 * math.pi) ** 1.5 / math.sinh(1.0) * math.exp(-0.25)
        assert value == pytest.approx(ref, rel=1e-12)

    def test_octonion_check(self, tmp_path):
        code, payload = run_cli(["octonion-check", "--n-pairs", "100"], tmp_path)
        assert code == 0
        assert b"fail" not in payload

    def test_fiber_profile_check(self, tmp_path):
        code, payload = run_cli(["fiber", "--check", "profile"], tmp_path)
        assert code == 0
        assert payload.decode().count("pass") == 16

    def test_fiber_values(self, tmp_path):
        code, payload = run_cli(
            ["fiber", "--t", "1", "--eta", "0.5", "--u", "0.25,0.5"], tmp_path)
        assert code == 0
        assert len(payload.decode().splitlines()) == 3

    def test_mc_check_smoke(self, tmp_path):
        code, payload = run_cli(
            ["mc-check", "--t", "0.25", "--n-paths", "4000", "--dt", "0.0005",
             "--seed", "2", "--z-max", "6"], tmp_path)
        assert code == 0
        lines = payload.decode().splitlines()
        assert lines[0] == "function,mc_mean,stderr,analytic,z"
        assert len(lines) == 4


class TestConfigFile:
    def test_config_supplies_defaults_and_flags_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("t = 1\nr = 0\neta = 0\nrep = 1\nn-u = 48\n")
        out_a = tmp_path / "a.csv"
        code = main(["eval", "--config", str(cfg), "--output", str(out_a)])
        assert code == 0
        assert len(out_a.read_text().splitlines()) == 2

        out_b = tmp_path / "b.csv"
        code = main(["eval", "--config", str(cfg), "--r", "0,1", "--output", str(out_b)])
        assert code == 0
        assert len(out_b.read_text().splitlines()) == 3

    def test_bad_config_key_exits_2(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("no_such_key = 1\n")
        assert main(["eval", "--config", str(cfg)]) == 2

    def test_bad_config_line_exits_2(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("just words\n")
        assert main(["eval", "--config", str(cfg)]) == 2
