"""End-to-end CLI coverage: byte-stable reports, exit codes, usage errors."""

import json
import pathlib

import pytest

from verblunsky import cli

GOLDEN_DIR = pathlib.Path(__file__).parent / "golden"

# Exact-arithmetic commands whose reports must never drift by a byte.  The
# sampling commands are excluded on purpose: their float formatting is allowed
# to differ in the last ulp between the numba and numpy kernel backends.
GOLDEN_CASES = {
    "variance_n3": ["variance", "--n", "3"],
    "identity_deg1": ["identity", "--p", "1:1", "--q", "1:1", "--beta", "1", "--max-index", "10000"],
    "count_basic": ["count", "--p", "1:1", "--q", "1:1", "--m", "1:1,2:1"],
    "gaussian_moment_22": ["gaussian-moment", "--p", "2:2", "--q", "2:2"],
    "gaussian_moment_raw": ["gaussian-moment", "--p", "1:1,2:1", "--q", "1:1,2:1", "--raw"],
    "alpha_moment_deg1": ["alpha-moment", "--p", "1:1", "--q", "1:1", "--beta", "2", "--max-index", "50"],
    "nice_identity_n1": ["nice-identity", "--n", "1", "--beta", "1", "--max-index", "100"],
    "jacobian_exact": ["jacobian", "--exact", "--alpha", "1/4+1/4i,1/8"],
}


def _run(capsys, argv):
    code = cli.run(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGoldenReports:
    @pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
    def test_bytes_stable(self, capsys, name):
        code, out, _ = _run(capsys, GOLDEN_CASES[name])
        assert code == 0
        assert out == (GOLDEN_DIR / f"{name}.json").read_text()

    def test_variance_pinned_polynomial(self, capsys):
        _, out, _ = _run(capsys, ["variance", "--n", "3"])
        rep = json.loads(out)
        assert rep["results"]["polynomial"] == {"3": "1/6", "2": "1/2", "1": "1/3"}
        assert rep["status"] == "PASS"

    def test_identity_pinned_tail(self, capsys):
        _, out, _ = _run(
            capsys, ["identity", "--p", "1:1", "--q", "1:1", "--beta", "1", "--max-index", "10000"]
        )
        rep = json.loads(out)
        assert rep["diagnostics"]["tail"] == "1/10001"
        assert rep["status"] == "PASS"

    def test_count_pinned_results(self, capsys):
        _, out, _ = _run(capsys, ["count", "--p", "1:1", "--q", "1:1", "--m", "1:1,2:1"])
        rep = json.loads(out)
        assert rep["results"] == {"tuples": 1, "graphs": 1}
        assert rep["status"] == "PASS"


class TestReportShape:
    def test_schema_and_sections(self, capsys):
        _, out, _ = _run(capsys, ["variance", "--n", "2"])
        rep = json.loads(out)
        assert rep["schema"] == 1
        assert set(rep) == {"schema", "command", "params", "results", "status", "diagnostics"}

    def test_threads_recorded(self, capsys):
        _, out, _ = _run(capsys, ["--threads", "2", "variance", "--n", "2"])
        assert json.loads(out)["params"]["threads"] == 2

    def test_multiple_beta_tail_map(self, capsys):
        _, out, _ = _run(
            capsys,
            ["identity", "--p", "1:1", "--q", "1:1", "--beta", "1,2", "--max-index", "100"],
        )
        rep = json.loads(out)
        assert set(rep["diagnostics"]["tail"]) == {"1/1", "2/1"}
        assert len(rep["results"]["checks"]) == 2

    def test_mc_mean_is_complex_pair(self, capsys):
        code, out, _ = _run(
            capsys,
            ["mc", "--side", "alpha", "--p", "1:1", "--q", "1:1", "--beta", "1",
             "--samples", "400", "--seed", "5", "--n-trunc", "20"],
        )
        assert code == 0
        rep = json.loads(out)
        mean = rep["results"]["mean"]
        assert isinstance(mean, list) and len(mean) == 2
        assert rep["diagnostics"]["rng"].startswith("numpy.random PCG64")


class TestSamplingDeterminism:
    MC = ["mc", "--side", "gaussian", "--p", "1:1", "--q", "1:1", "--beta", "1",
          "--samples", "300", "--seed", "9", "--n-trunc", "12"]
    PUSH = ["pushforward", "--beta", "1", "--modes", "16", "--radius", "0.9",
            "--samples", "40", "--seed", "2", "--max-alpha", "2"]

    def test_mc_run_twice_identical(self, capsys):
        _, out1, _ = _run(capsys, self.MC)
        _, out2, _ = _run(capsys, self.MC)
        assert out1 == out2

    def test_pushforward_run_twice_identical(self, capsys):
        code, out1, _ = _run(capsys, self.PUSH)
        _, out2, _ = _run(capsys, self.PUSH)
        assert code == 0
        assert out1 == out2
        rep = json.loads(out1)
        assert rep["status"] == "EXPERIMENTAL"
        assert [row["n"] for row in rep["results"]["moments"]] == [1, 2]


class TestExitCodes:
    def test_fail_is_one(self, capsys):
        code, out, _ = _run(capsys, ["jacobian", "--alpha", "0.3,0.2", "--tol", "1e-300"])
        assert code == 1
        assert json.loads(out)["status"] == "FAIL"

    def test_experimental_is_zero(self, capsys):
        code, out, _ = _run(capsys, TestSamplingDeterminism.PUSH)
        assert code == 0
        assert json.loads(out)["status"] == "EXPERIMENTAL"

    def test_malformed_multi_index_names_token(self, capsys):
        code, out, err = _run(capsys, ["gaussian-moment", "--p", "2:0", "--q", "1:1"])
        assert code == 2
        assert out == ""
        assert "2:0" in err

    def test_no_command(self, capsys):
        assert _run(capsys, [])[0] == 2

    def test_unknown_command(self, capsys):
        assert _run(capsys, ["laplace"])[0] == 2

    def test_domain_error_reports_and_exits_two(self, capsys):
        code, _, err = _run(
            capsys,
            ["mc", "--side", "alpha", "--p", "1:1", "--q", "1:1", "--beta", "1",
             "--samples", "10", "--seed", "0", "--n-trunc", "2"],
        )
        assert code == 2
        assert err.startswith("error:")

    def test_bad_rational(self, capsys):
        code, _, err = _run(
            capsys, ["alpha-moment", "--p", "1:1", "--q", "1:1", "--beta", "x", "--max-index", "5"]
        )
        assert code == 2
        assert "x" in err

    def test_bad_alpha_list(self, capsys):
        code, _, err = _run(capsys, ["szego-check", "--alpha", "0.3+?i", "--order", "10"])
        assert code == 2
        assert "alpha" in err


class TestNumericCommands:
    def test_szego_check_passes(self, capsys):
        code, out, _ = _run(capsys, ["szego-check", "--alpha", "0.3,0.2+0.1i", "--order", "200"])
        assert code == 0
        assert json.loads(out)["results"]["gap"] <= 1e-8

    def test_roundtrip_passes(self, capsys):
        code, out, _ = _run(
            capsys, ["roundtrip", "--alpha", "0.4,0.1-0.2i,0.25i", "--grid", "4096"]
        )
        assert code == 0
        assert json.loads(out)["results"]["max_error"] <= 1e-9

    def test_jacobian_fd_passes(self, capsys):
        code, out, _ = _run(capsys, ["jacobian", "--alpha", "0.3+0.1i,0.2"])
        assert code == 0
        assert json.loads(out)["diagnostics"]["relative_gap"] <= 1e-6

    def test_alpha_file_input(self, capsys, tmp_path):
        path = tmp_path / "alpha.json"
        path.write_text(json.dumps([[0.3, 0.1], [0.2, 0.0]]))
        _, out_file, _ = _run(capsys, ["szego-check", "--alpha", str(path), "--order", "50"])
        _, out_inline, _ = _run(capsys, ["szego-check", "--alpha", "0.3+0.1i,0.2", "--order", "50"])
        assert json.loads(out_file)["results"]["gap"] == json.loads(out_inline)["results"]["gap"]

    def test_mc_dump_csv(self, capsys, tmp_path):
        path = tmp_path / "mc.csv"
        code, out, _ = _run(
            capsys,
            ["mc", "--side", "alpha", "--p", "1:1", "--q", "1:1", "--beta", "1",
             "--samples", "30", "--seed", "1", "--n-trunc", "8", "--dump-csv", str(path)],
        )
        assert code == 0
        assert json.loads(out)["params"]["dump_csv"] == str(path)
        assert len(path.read_text().splitlines()) == 32  # 2 header lines + 30 rows
