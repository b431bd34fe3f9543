"""Experiment harness: config handling, reproducibility, curve summaries."""
import numpy as np
import pytest

from ign_graphon.experiments import (
    DEFAULT_SIZES,
    MODES,
    ConfigError,
    ExperimentConfig,
    counterexample_gap,
    derive_seed,
    median_curve,
    parse_config,
    run_experiment,
    summarize,
    summary_to_csv,
)
from ign_graphon.metrics import records_to_csv

TINY = ExperimentConfig(graphons=("er:p=0.5", "sbm"), sizes=(8, 16),
                        trials=2, n_layers=2, hidden=4, n_ref=256)


class TestConfig:
    def test_defaults_valid(self):
        ExperimentConfig().validate()
        assert ExperimentConfig().sizes == DEFAULT_SIZES
        assert ExperimentConfig().modes == MODES

    def test_arch_shape(self):
        assert TINY.arch == ((2, 2), (2, 4), (2, 4))

    def test_all_problems_reported_together(self):
        bad = ExperimentConfig(sizes=(16, 8), trials=0,
                               modes=("ew-fixed", "mystery"),
                               ground_truth_mode="psychic")
        with pytest.raises(ConfigError) as exc:
            bad.validate()
        msg = str(exc.value)
        for fragment in ("ascending", "trials", "mystery", "psychic"):
            assert fragment in msg

    def test_n_ref_must_dominate_sizes(self):
        with pytest.raises(ConfigError, match="n_ref"):
            ExperimentConfig(sizes=(32, 512), n_ref=512).validate()

    def test_bad_graphon_spec(self):
        with pytest.raises(ConfigError, match="graphon"):
            ExperimentConfig(graphons=("nope",)).validate()


class TestConfigText:
    def test_round_trip(self):
        assert parse_config(TINY.to_text()) == TINY

    def test_comments_and_blanks_ignored(self):
        text = "# a comment\n\n" + TINY.to_text()
        assert parse_config(text) == TINY

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown config key"):
            parse_config("wibble = 3\n")

    def test_non_identity_signal_rejected(self):
        with pytest.raises(ConfigError):
            parse_config(TINY.to_text() + "signal = zero\n")


class TestDeriveSeed:
    def test_stable(self):
        assert derive_seed(0, 1, 64, 3) == derive_seed(0, 1, 64, 3)

    def test_distinct_across_arguments(self):
        seeds = {derive_seed(b, f, n, t)
                 for b in (0, 1) for f in (0, 1, 2)
                 for n in (32, 64) for t in (0, 1)}
        assert len(seeds) == 24


@pytest.fixture(scope="module")
def tiny_run():
    return run_experiment(TINY)


class TestRunExperiment:
    def test_deterministic_rerun(self, tiny_run):
        records, summary = tiny_run
        records2, summary2 = run_experiment(TINY)
        assert records_to_csv(records) == records_to_csv(records2)
        assert summary_to_csv(summary) == summary_to_csv(summary2)

    def test_expected_row_count(self, tiny_run):
        records, _ = tiny_run
        # per (graphon, n, trial): 1 ew-fixed + 1 ew-random + 1 ep-raw
        # + 2 ep-smoothed (output_l2 and d2inf)
        assert len(records) == 2 * 2 * 2 * 5

    def test_rows_sorted(self, tiny_run):
        records, _ = tiny_run
        keys = [(r.graphon, r.mode, r.metric, r.n, r.seed) for r in records]
        assert keys == sorted(keys)

    def test_ep_modes_share_samples(self, tiny_run):
        records, _ = tiny_run
        raw = {(r.graphon, r.n, r.seed) for r in records if r.mode == "ep-raw"}
        sm = {(r.graphon, r.n, r.seed) for r in records
              if r.mode == "ep-smoothed" and r.metric == "output_l2"}
        assert raw == sm

    def test_median_curve(self, tiny_run):
        records, _ = tiny_run
        curve = median_curve(records, "sbm", "ew-fixed")
        assert [n for n, _ in curve] == [8, 16]
        assert all(v > 0 for _, v in curve)

    def test_summary_covers_all_curves(self, tiny_run):
        records, summary = tiny_run
        keys = {(g, m, met) for _, g, m, met, _ in summary}
        assert ("sbm", "ep-smoothed", "d2inf") in keys
        assert len(keys) == 2 * 5
        # two sizes only: slope requires three points, so all are nan
        assert all(np.isnan(s) for *_, s in summary)

    def test_write_results(self, tmp_path, tiny_run):
        records, _ = tiny_run
        records2, _ = run_experiment(TINY, out_dir=str(tmp_path))
        assert (tmp_path / "records.csv").read_text() == records_to_csv(records)
        assert "slope" in (tmp_path / "summary.csv").read_text()
        snap = (tmp_path / "config.snapshot").read_text()
        assert "model_seed = 5" in snap
        assert "timestamp = " in snap

    def test_subset_of_modes(self):
        cfg = ExperimentConfig(graphons=("er:p=0.5",), sizes=(8, 16), trials=1,
                               modes=("ew-fixed",), n_layers=1, hidden=2,
                               n_ref=256)
        records, _ = run_experiment(cfg)
        assert {r.mode for r in records} == {"ew-fixed"}

    def test_invalid_config_rejected_before_compute(self):
        with pytest.raises(ConfigError):
            run_experiment(ExperimentConfig(trials=0))


class TestCounterexampleGap:
    def test_gap_near_limit(self):
        gaps, limit = counterexample_gap(sizes=(64, 128), n_seeds=4)
        assert limit == pytest.approx(0.025)
        for n, g in gaps.items():
            assert g == pytest.approx(limit, rel=0.3)
