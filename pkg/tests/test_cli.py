"""End-to-end command-line checks.

Covers exit codes, report shape, config files and flag precedence, CSV
sidecars, row filtering, and byte-level determinism of the JSON report.
All invocations run in process through the run_cli fixture.
"""

from __future__ import annotations

import csv
import json
import pathlib

import pytest

import rbroc.datasets as datasets
from _oracles import BETA_CASES, NG_EXACT, S31_PREV_CONTENT, S31_PREV_EST, S31_PREV_PL

DATA_DIR = pathlib.Path(datasets.__file__).parent
EX2_CSV = str(DATA_DIR / "ex2_counts.csv")
SIM_CSV = str(DATA_DIR / "binormal_sim.csv")
COVID_CSV = str(DATA_DIR / "covid_synth.csv")

# small, fast MC settings shared by the smoke runs
FAST = ("--draws", "2000", "--batch-size", "500", "--seed", "9")

BINORMAL_BASE = (
    "analyze-binormal",
    "--stats-nd", "25,-0.072,19.638",
    "--stats-d", "20,0.976,16.778",
    "--mu0", "0", "--tau0", "0.5", "--lambda1", "1.787", "--lambda2", "1.056",
    "--w-beta", "15.3589,22.53835",
    "--w-counts", "20,25",
    "--auc-bins", "25", "--cutoff-bins", "50", "--rate-bins", "10",
)


class TestTopLevel:
    def test_help_exits_zero(self, run_cli):
        res = run_cli("--help")
        assert res.code == 0
        assert "usage" in res.stdout.lower()

    def test_version_exits_zero(self, run_cli):
        res = run_cli("--version")
        assert res.code == 0
        assert res.stdout.startswith("rbroc ")

    def test_no_subcommand_is_usage_error(self, run_cli):
        assert run_cli().code == 2

    def test_unknown_flag_is_usage_error(self, run_cli):
        assert run_cli("prevalence", "--no-such-flag").code == 2


class TestElicit:
    def test_beta_matches_frozen_roots(self, run_cli):
        res = run_cli("elicit", "--kind", "beta", "--lo", "0.60", "--hi", "0.70")
        assert res.code == 0
        rep = res.report
        assert rep["provenance"]["command"] == "elicit"
        out = rep["results"]
        assert out["kind"] == "beta"
        lo, hi, gamma, a1, a2, tau = BETA_CASES[0]
        assert out["alpha1"] == pytest.approx(a1, rel=1e-9)
        assert out["alpha2"] == pytest.approx(a2, rel=1e-9)
        # report carries alpha1 + alpha2; the frozen value is that minus 2
        assert out["concentration"] == pytest.approx(tau + 2.0, rel=1e-9)
        assert out["mode"] == pytest.approx(0.65)

    def test_beta_missing_interval(self, run_cli):
        res = run_cli("elicit", "--kind", "beta", "--lo", "0.6")
        assert res.code == 2
        assert "needs --lo and --hi" in res.stderr

    def test_beta_reversed_interval(self, run_cli):
        res = run_cli("elicit", "--kind", "beta", "--lo", "0.7", "--hi", "0.6")
        assert res.code == 2
        assert res.stderr.startswith("error:")

    def test_normal_gamma_matches_frozen_roots(self, run_cli):
        res = run_cli(
            "elicit", "--kind", "normal-gamma",
            "--m1", "-5", "--m2", "5", "--s-lo", "1", "--s-hi", "10",
        )
        assert res.code == 0
        out = res.report["results"]
        l1, l2 = NG_EXACT[(1.0, 10.0, 0.99)]
        assert out["mu0"] == 0.0
        assert out["tau0"] == pytest.approx(0.5)
        assert out["lambda1"] == pytest.approx(l1, rel=5e-3)
        assert out["lambda2"] == pytest.approx(l2, rel=5e-3)

    def test_normal_gamma_missing_bound(self, run_cli):
        res = run_cli("elicit", "--kind", "normal-gamma", "--m1", "-5", "--m2", "5")
        assert res.code == 2
        assert "--s-lo" in res.stderr

    def test_dp_concentration(self, run_cli):
        res = run_cli(
            "elicit", "--kind", "dp-concentration", "--epsilon", "0.25", "--bound", "0.1"
        )
        assert res.code == 0
        out = res.report["results"]
        assert out["a"] == pytest.approx(9.8, abs=0.1)
        assert out["achieved_bound"] <= 0.1

    def test_dp_missing_args(self, run_cli):
        res = run_cli("elicit", "--kind", "dp-concentration", "--epsilon", "0.25")
        assert res.code == 2
        assert "--bound" in res.stderr


class TestPrevalence:
    def test_elicited_prior_matches_exact_oracle(self, run_cli):
        res = run_cli("prevalence", "--w-lo", "0.6", "--w-hi", "0.7", "--w-counts", "68,32")
        assert res.code == 0
        out = res.report["results"]
        assert out["posterior"]["alpha1"] == pytest.approx(BETA_CASES[0][3] + 68, rel=1e-12)
        w = out["w"]
        assert w["estimate"] == pytest.approx(S31_PREV_EST, abs=1e-12)
        assert w["plausible_content"] == pytest.approx(S31_PREV_CONTENT, rel=1e-12)
        assert len(w["plausible_region"]) == 1
        assert tuple(w["plausible_region"][0]) == pytest.approx(S31_PREV_PL, abs=1e-12)

    def test_explicit_beta_prior(self, run_cli):
        res = run_cli("prevalence", "--w-beta", "15.3589,22.53835", "--w-counts", "20,25")
        assert res.code == 0
        out = res.report["results"]
        assert out["posterior"]["alpha1"] == pytest.approx(35.3589, rel=1e-15)
        assert out["posterior"]["alpha2"] == pytest.approx(47.53835, rel=1e-15)
        assert out["w"]["estimate"] == pytest.approx(0.4445, abs=1e-12)
        assert out["w"]["plausible_content"] == pytest.approx(0.78231, abs=1e-4)

    def test_counts_required(self, run_cli):
        res = run_cli("prevalence", "--w-beta", "2,3")
        assert res.code == 2
        assert "--w-counts" in res.stderr

    def test_known_prevalence_rejected(self, run_cli):
        res = run_cli("prevalence", "--w-known", "0.5", "--w-counts", "1,1")
        assert res.code == 2
        assert "known prevalence" in res.stderr

    def test_reversed_elicitation_interval(self, run_cli):
        res = run_cli("prevalence", "--w-lo", "0.7", "--w-hi", "0.6", "--w-counts", "1,1")
        assert res.code == 2
        assert res.stderr.startswith("error:")

    def test_malformed_beta_spec(self, run_cli):
        res = run_cli("prevalence", "--w-beta", "1,2,3", "--w-counts", "1,1")
        assert res.code == 2
        assert "expected 2 values" in res.stderr

    def test_exactly_one_prior_source(self, run_cli):
        res = run_cli(
            "prevalence", "--w-beta", "2,3", "--w-known", "0.5", "--w-counts", "1,1"
        )
        assert res.code == 2
        assert "exactly one" in res.stderr

    def test_byte_identical_reruns(self, run_cli):
        args = ("prevalence", "--w-beta", "15.3589,22.53835", "--w-counts", "20,25")
        assert run_cli(*args).stdout == run_cli(*args).stdout


class TestAnalyzeDiscrete:
    def test_smoke_report_shape(self, run_cli):
        res = run_cli("analyze-discrete", "--data", EX2_CSV, "--w-known", "0.65", *FAST)
        assert res.code == 0
        rep = res.report
        assert rep["provenance"]["command"] == "analyze-discrete"
        assert rep["provenance"]["n_draws"] == 2000
        out = rep["results"]
        for key in ("h0_auc_gt_half", "auc", "c_opt", "rates", "diagnostics"):
            assert key in out
        assert 0.0 < out["auc"]["estimate"] < 1.0
        assert out["rates"]["cutoff"] in ([*out["levels"]] + ["+inf"])

    def test_missing_data_flag(self, run_cli):
        res = run_cli("analyze-discrete", "--w-known", "0.65")
        assert res.code == 2
        assert "--data" in res.stderr

    def test_nonexistent_data_file(self, run_cli):
        res = run_cli("analyze-discrete", "--data", "/no/such.csv", "--w-known", "0.65")
        assert res.code == 3
        assert "not found" in res.stderr

    def test_wrong_columns(self, run_cli, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b,c\n1,2,3\n")
        res = run_cli("analyze-discrete", "--data", str(bad), "--w-known", "0.65")
        assert res.code == 3
        assert "need columns" in res.stderr

    def test_non_integer_count(self, run_cli, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("level,count_nd,count_d\n1,2,3\n2,x,1\n")
        res = run_cli("analyze-discrete", "--data", str(bad), "--w-known", "0.65")
        assert res.code == 3

    def test_empty_data_file(self, run_cli, tmp_path):
        bad = tmp_path / "empty.csv"
        bad.write_text("level,count_nd,count_d\n")
        res = run_cli("analyze-discrete", "--data", str(bad), "--w-known", "0.65")
        assert res.code == 3
        assert "no data rows" in res.stderr

    def test_conditioning_floor_exits_four(self, run_cli, tmp_path):
        # diseased scores concentrated far below nondiseased: the posterior
        # leaves nothing above AUC = 1/2, so the conditional pass must bail
        rev = tmp_path / "reversed.csv"
        rev.write_text("level,count_nd,count_d\n1,0,200\n2,0,0\n3,200,0\n")
        res = run_cli(
            "analyze-discrete", "--data", str(rev), "--w-known", "0.5",
            "--conditional", *FAST,
        )
        assert res.code == 4
        assert "acceptance" in res.stderr

    def test_fixed_cutoff_flag(self, run_cli):
        res = run_cli(
            "analyze-discrete", "--data", EX2_CSV, "--w-known", "0.65",
            "--fixed-cutoff", "3", *FAST,
        )
        assert res.code == 0
        assert res.report["results"]["rates"]["cutoff"] == 3.0

    def test_fixed_cutoff_off_support(self, run_cli):
        res = run_cli(
            "analyze-discrete", "--data", EX2_CSV, "--w-known", "0.65",
            "--fixed-cutoff", "2.5", *FAST,
        )
        assert res.code == 2
        assert "support level" in res.stderr

    def test_byte_identical_reruns(self, run_cli):
        args = ("analyze-discrete", "--data", EX2_CSV, "--w-known", "0.65", *FAST)
        assert run_cli(*args).stdout == run_cli(*args).stdout

    def test_threads_only_touch_diagnostics(self, run_cli):
        base = ("analyze-discrete", "--data", EX2_CSV, "--w-known", "0.65", *FAST)
        r1 = run_cli(*base).report
        r2 = run_cli(*base, "--threads", "3").report
        assert r2["results"]["diagnostics"].pop("threads") == 3
        assert r1["results"]["diagnostics"].pop("threads") == 1
        assert r1["results"] == r2["results"]


class TestAnalyzeBinormal:
    def test_stats_path_smoke(self, run_cli):
        res = run_cli(*BINORMAL_BASE, *FAST)
        assert res.code == 0
        out = res.report["results"]
        for key in ("h0_positive_effect", "auc", "c_opt", "rates", "prevalence", "diagnostics"):
            assert key in out
        assert 0.5 < out["auc"]["estimate"] < 1.0
        assert out["prevalence"]["posterior"]["alpha1"] == pytest.approx(35.3589)

    def test_unequal_variances_smoke(self, run_cli):
        res = run_cli(*BINORMAL_BASE, "--variances", "unequal", *FAST)
        assert res.code == 0
        assert "h0_finite_cutoff" in res.report["results"]

    def test_bad_variances_choice(self, run_cli):
        assert run_cli(*BINORMAL_BASE, "--variances", "welch").code == 2

    def test_stats_need_both_groups(self, run_cli):
        res = run_cli(
            "analyze-binormal", "--stats-nd", "25,-0.072,19.638",
            "--mu0", "0", "--tau0", "0.5", "--lambda1", "1.787", "--lambda2", "1.056",
            "--w-known", "0.5",
        )
        assert res.code == 2
        assert "--stats-d" in res.stderr

    def test_prior_sources_are_exclusive(self, run_cli):
        res = run_cli(
            "analyze-binormal", "--stats-nd", "2,0,1", "--stats-d", "2,1,1",
            "--mu0", "0", "--tau0", "0.5", "--lambda1", "2", "--lambda2", "1",
            "--means-lo", "-5", "--means-hi", "5", "--sd-lo", "1", "--sd-hi", "10",
            "--w-known", "0.5",
        )
        assert res.code == 2

    def test_partial_prior_spec(self, run_cli):
        res = run_cli(
            "analyze-binormal", "--stats-nd", "2,0,1", "--stats-d", "2,1,1",
            "--mu0", "0", "--w-known", "0.5",
        )
        assert res.code == 2
        assert "--mu0 needs" in res.stderr

    def test_data_path_with_filter(self, run_cli):
        res = run_cli(
            "analyze-binormal", "--data", COVID_CSV, "--filter", "sex=female",
            "--mu0", "45", "--tau0", "0.75", "--lambda1", "8.545", "--lambda2", "1080.596",
            "--w-known", "0.1",
            "--draws", "1000", "--batch-size", "500",
            "--auc-bins", "20", "--cutoff-bins", "20", "--rate-bins", "10",
        )
        assert res.code == 0
        assert res.report["provenance"]["config"]["filter"] == "sex=female"

    def test_filter_without_match(self, run_cli):
        res = run_cli(
            "analyze-binormal", "--data", COVID_CSV, "--filter", "sex=other",
            "--mu0", "45", "--tau0", "0.75", "--lambda1", "8.545", "--lambda2", "1080.596",
            "--w-known", "0.1",
        )
        assert res.code == 3
        assert "matched no rows" in res.stderr

    def test_filter_bad_syntax(self, run_cli):
        res = run_cli(
            "analyze-binormal", "--data", COVID_CSV, "--filter", "sexmale",
            "--mu0", "45", "--tau0", "0.75", "--lambda1", "8.545", "--lambda2", "1080.596",
            "--w-known", "0.1",
        )
        assert res.code == 2
        assert "column=value" in res.stderr

    def test_filter_unknown_column(self, run_cli):
        res = run_cli(
            "analyze-binormal", "--data", COVID_CSV, "--filter", "age=5",
            "--mu0", "45", "--tau0", "0.75", "--lambda1", "8.545", "--lambda2", "1080.596",
            "--w-known", "0.1",
        )
        assert res.code == 3
        assert "no column" in res.stderr

    def test_bad_group_label(self, run_cli, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("group,value\nnd,1.0\nx,2.0\nd,3.0\nnd,0.5\nd,2.5\n")
        res = run_cli(
            "analyze-binormal", "--data", str(bad),
            "--mu0", "0", "--tau0", "0.5", "--lambda1", "2", "--lambda2", "1",
            "--w-known", "0.5",
        )
        assert res.code == 3
        assert "group" in res.stderr

    def test_byte_identical_reruns(self, run_cli):
        args = (*BINORMAL_BASE, *FAST)
        assert run_cli(*args).stdout == run_cli(*args).stdout


class TestAnalyzeDP:
    BASE = (
        "analyze-dp", "--data", SIM_CSV, "--concentration", "20",
        "--mu0", "0", "--tau0", "0.5", "--lambda1", "1.787", "--lambda2", "1.056",
        "--w-beta", "15.3589,22.53835", "--w-counts", "20,25",
        "--trunc-prior", "50", "--trunc-post", "50",
        "--auc-bins", "25", "--cutoff-bins", "64", "--rate-bins", "10",
        "--draws", "400", "--batch-size", "200", "--seed", "6",
    )

    def test_smoke_report_shape(self, run_cli):
        res = run_cli(*self.BASE, "--criteria", "error,weighted:0.3",
                      "--fixed-cutoffs", "0.5")
        assert res.code == 0
        out = res.report["results"]
        for key in ("h0_auc_gt_half", "auc", "c_opt", "rates", "diagnostics"):
            assert key in out
        assert out["diagnostics"]["concentration"] == 20.0
        assert set(out["rates"]) >= {"error", "weighted:0.3", "fixed:0.5"}
        assert out["rates"]["fixed:0.5"]["cutoff"] == 0.5

    def test_missing_concentration(self, run_cli):
        res = run_cli(
            "analyze-dp", "--data", SIM_CSV,
            "--mu0", "0", "--tau0", "0.5", "--lambda1", "1.787", "--lambda2", "1.056",
            "--w-known", "0.3",
        )
        assert res.code == 2
        assert "--concentration" in res.stderr

    def test_bad_criterion(self, run_cli):
        res = run_cli(*self.BASE, "--criteria", "weighted:1.5")
        assert res.code == 2

    def test_cutoff_bounds_go_together(self, run_cli):
        res = run_cli(*self.BASE, "--cutoff-lo", "-2")
        assert res.code == 2
        assert "go together" in res.stderr

    def test_jitter_echoed_and_deterministic(self, run_cli):
        r1 = run_cli(*self.BASE, "--jitter")
        r2 = run_cli(*self.BASE, "--jitter")
        assert r1.code == 0
        assert r1.report["provenance"]["config"]["jitter"] is True
        assert r1.stdout == r2.stdout

    def test_byte_identical_reruns(self, run_cli):
        assert run_cli(*self.BASE).stdout == run_cli(*self.BASE).stdout


class TestConfigFile:
    def test_values_apply(self, run_cli, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("draws = 2000\nseed = 9\nbatch-size = 500  # trailing comment\n")
        res = run_cli(
            "analyze-discrete", "--config", str(cfg), "--data", EX2_CSV,
            "--w-known", "0.65",
        )
        assert res.code == 0
        prov = res.report["provenance"]
        assert prov["n_draws"] == 2000
        assert prov["seed"] == 9
        assert prov["batch_size"] == 500

    def test_flags_beat_config(self, run_cli, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("draws = 2000\nseed = 9\nbatch_size = 500\n")
        res = run_cli(
            "analyze-discrete", "--config", str(cfg), "--data", EX2_CSV,
            "--w-known", "0.65", "--seed", "4",
        )
        assert res.code == 0
        prov = res.report["provenance"]
        assert prov["seed"] == 4
        assert prov["n_draws"] == 2000

    def test_config_equals_flags(self, run_cli, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("draws = 2000\nseed = 9\nbatch-size = 500\nw-known = 0.65\n")
        via_cfg = run_cli("analyze-discrete", "--config", str(cfg), "--data", EX2_CSV)
        via_flags = run_cli("analyze-discrete", "--data", EX2_CSV, "--w-known", "0.65", *FAST)
        assert via_cfg.code == via_flags.code == 0
        assert via_cfg.report["results"] == via_flags.report["results"]

    def test_boolean_keys(self, run_cli, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("monotone = yes\nconditional = on\ndraws = 2000\nbatch-size = 500\n")
        res = run_cli(
            "analyze-discrete", "--config", str(cfg), "--data", EX2_CSV,
            "--w-known", "0.65", "--seed", "9",
        )
        assert res.code == 0
        out = res.report["results"]
        assert out["diagnostics"]["monotone"] is True
        assert "conditional" in out

    def test_unknown_key(self, run_cli, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("n-draws = 2000\n")
        res = run_cli("analyze-discrete", "--config", str(cfg), "--data", EX2_CSV,
                      "--w-known", "0.65")
        assert res.code == 2
        assert "unknown config keys: n_draws" in res.stderr

    def test_bad_boolean(self, run_cli, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("monotone = maybe\n")
        res = run_cli("analyze-discrete", "--config", str(cfg), "--data", EX2_CSV,
                      "--w-known", "0.65")
        assert res.code == 2
        assert "expected a boolean" in res.stderr

    def test_bad_typed_value(self, run_cli, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("draws = many\n")
        res = run_cli("analyze-discrete", "--config", str(cfg), "--data", EX2_CSV,
                      "--w-known", "0.65")
        assert res.code == 2
        assert "bad value" in res.stderr

    def test_missing_file(self, run_cli):
        res = run_cli("analyze-discrete", "--config", "/no/such.cfg", "--data", EX2_CSV,
                      "--w-known", "0.65")
        assert res.code == 2
        assert "config file not found" in res.stderr

    def test_requires_subcommand(self, run_cli, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("draws = 2000\n")
        res = run_cli("--config", str(cfg))
        assert res.code == 2
        assert "requires a subcommand" in res.stderr

    def test_line_without_equals(self, run_cli, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("draws 2000\n")
        res = run_cli("analyze-discrete", "--config", str(cfg), "--data", EX2_CSV,
                      "--w-known", "0.65")
        assert res.code == 2
        assert "expected 'key = value'" in res.stderr


class TestSidecars:
    @pytest.fixture()
    def out_dir(self, run_cli, tmp_path):
        d = tmp_path / "run"
        res = run_cli(
            "analyze-discrete", "--data", EX2_CSV, "--w-beta", "15.3589,22.53835",
            "--w-counts", "20,25", "--out", str(d), *FAST,
        )
        assert res.code == 0
        return d, res

    def test_report_json_matches_stdout(self, out_dir):
        d, res = out_dir
        on_disk = json.loads((d / "report.json").read_text())
        assert on_disk == res.report

    def test_rb_curves_csv(self, out_dir):
        d, _ = out_dir
        with (d / "rb_curves.csv").open(newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["quantity", "bin_lo", "bin_hi", "midpoint", "prior", "posterior", "rb"]
        body = rows[1:]
        assert body
        quantities = {r[0] for r in body}
        assert any(q.startswith("auc") for q in quantities)
        # the cutoff curve is categorical over the support plus +inf
        copt_rows = [r for r in body if r[0] == "c_opt"]
        assert any(r[3] == "+inf" for r in copt_rows)
        # every numeric-grid row carries parseable masses summing to at most 1
        auc_rows = [r for r in body if r[0] == "auc"]
        post_total = sum(float(r[5]) for r in auc_rows)
        assert 0.9 < post_total <= 1.0 + 1e-9

    def test_assessments_csv(self, out_dir):
        d, _ = out_dir
        with (d / "assessments.csv").open(newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["hypothesis", "rb", "strength", "prior_prob", "posterior_prob"]
        assert any(r[0] == "h0_auc_gt_half" for r in rows[1:])

    def test_diagnostics_csv(self, out_dir):
        d, _ = out_dir
        with (d / "diagnostics.csv").open(newline="") as fh:
            rows = list(csv.reader(fh))
        keys = {r[0] for r in rows[1:]}
        assert "backend" in keys
        assert "provenance/command" in keys

    def test_nested_out_dir_created(self, run_cli, tmp_path):
        d = tmp_path / "a" / "b"
        res = run_cli("prevalence", "--w-beta", "2,3", "--w-counts", "4,5", "--out", str(d))
        assert res.code == 0
        assert (d / "report.json").is_file()

    def test_report_file_identical_across_runs(self, run_cli, tmp_path):
        args = ("analyze-discrete", "--data", EX2_CSV, "--w-known", "0.65", *FAST)
        d1, d2 = tmp_path / "r1", tmp_path / "r2"
        assert run_cli(*args, "--out", str(d1)).code == 0
        assert run_cli(*args, "--out", str(d2)).code == 0
        assert (d1 / "report.json").read_bytes() == (d2 / "report.json").read_bytes()
