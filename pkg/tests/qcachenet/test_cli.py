"""
End-to-end tests for the qcachenet command line.
"""
import json

import pandas as pd
import pytest

from src.qcachenet.cli import build_parser, main
from src.qcachenet.cli.commands import (
    DECODE_COLUMNS,
    OPTIMIZE_COLUMNS,
    QUEUE_WAIT_COLUMNS,
    cmd_queue_wait,
    reproduce_figures,
)
from src.qcachenet.cli.main import EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_OK
from src.qcachenet.schemas import ExperimentConfig

SMALL_CONFIG = """\
# small end-to-end grid
path_lengths_km = 20
arrival_rates_mhz = 0.2
serving_rates_mhz = 0.1
qubit_counts = 3, 5
edge_counts = 2, 4
memory_units = 1, 2, 3
trials = 10000
served_target = 10000
seed = 7
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "small.conf"
    path.write_text(SMALL_CONFIG, encoding="utf-8")
    return path


def write_config(tmp_path, extra: str):
    path = tmp_path / "custom.conf"
    path.write_text(SMALL_CONFIG + extra, encoding="utf-8")
    return str(path)


class TestParser:
    """Argument parsing."""

    def test_subcommands(self):
        """Test that every subcommand accepts the shared flags."""
        parser = build_parser()
        for command in ("queue-wait", "fidelity-sweep", "decode-error", "optimize", "reproduce-figures", "show-config"):
            args = parser.parse_args([command, "--seed", "3", "--format", "json"])
            assert args.command == command
            assert args.seed == 3

    def test_compat_flags_default_to_none(self):
        """Test that unset compat flags do not override the config file."""
        args = build_parser().parse_args(["optimize"])
        assert args.compat_doubled_exponent is None
        assert args.compat_literal_constraint is None

    def test_bad_choice_exits(self):
        """Test that argparse rejects an unknown decoder with status 2."""
        with pytest.raises(SystemExit) as excinfo:
            main(["optimize", "--decoder", "bp"])
        assert excinfo.value.code == 2


class TestShowConfig:
    """Effective configuration output."""

    def test_flags_override_file(self, config_file, capsys):
        """Test precedence: defaults, then file, then flags."""
        code = main(["show-config", "--config", str(config_file), "--seed", "99", "--compat-literal-constraint"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "seed = 99" in out
        assert "qubit_counts = 3, 5" in out
        assert "literal_constraint = true" in out
        assert "doubled_exponent = false" in out

    def test_compat_exponent_flag_names(self, config_file, capsys):
        """Test that both spellings of the swap-exponent flag set doubled_exponent."""
        for flag in ("--compat-eq13b-exponent", "--compat-doubled-exponent"):
            assert main(["show-config", "--config", str(config_file), flag]) == EXIT_OK
            assert "doubled_exponent = true" in capsys.readouterr().out

    def test_bad_config_value(self, tmp_path):
        """Test exit status 2 for an invalid config value."""
        assert main(["show-config", "--config", write_config(tmp_path, "eta = -1\n")]) == EXIT_CONFIG

    def test_missing_config_file(self, tmp_path):
        """Test exit status 2 for a missing config file."""
        assert main(["show-config", "--config", str(tmp_path / "nope.conf")]) == EXIT_CONFIG

    def test_invalid_flag_value(self, config_file):
        """Test exit status 2 when a flag fails validation."""
        assert main(["show-config", "--config", str(config_file), "--trials", "10"]) == EXIT_CONFIG


class TestCommands:
    """Table-producing commands."""

    def test_queue_wait_table(self, small_config):
        """Test queue-wait rows: one per (lambda, gamma, I), degenerate analytic left empty."""
        df = cmd_queue_wait(small_config, workers=2)
        assert list(df.columns) == QUEUE_WAIT_COLUMNS
        assert len(df) == 3
        assert list(df["I"]) == [1, 2, 3]
        assert df.loc[df["I"] == 1, "markov_wait_s"].iloc[0] == 0.0
        assert pd.isna(df.loc[df["I"] == 2, "analytic_wait_s"].iloc[0])
        assert (df["des_served"] == 10_000).all()

    def test_decode_error_json(self, config_file, tmp_path):
        """Test decode-error JSON output: both decoders with a shared seed."""
        out = tmp_path / "decode.json"
        code = main(["decode-error", "--config", str(config_file), "--format", "json", "--out", str(out)])
        assert code == EXIT_OK
        payload = json.loads(out.read_text(encoding="utf-8"))
        assert payload["columns"] == DECODE_COLUMNS
        assert len(payload["rows"]) == 2 * 2 * 3 * 2
        decoder_index = DECODE_COLUMNS.index("decoder")
        assert {row[decoder_index] for row in payload["rows"]} == {"mwm", "lut"}
        exact = DECODE_COLUMNS.index("p_exact")
        for mwm, lut in zip(payload["rows"][::2], payload["rows"][1::2]):
            assert lut[exact] <= mwm[exact] + 1e-12

    def test_optimize_writes_summary(self, config_file, tmp_path):
        """Test optimize table and its summary file."""
        out = tmp_path / "opt.csv"
        assert main(["optimize", "--config", str(config_file), "--out", str(out)]) == EXIT_OK
        df = pd.read_csv(out)
        assert list(df.columns) == OPTIMIZE_COLUMNS
        assert len(df) == 2 * 2 * 3
        summary = json.loads((tmp_path / "opt_summary.json").read_text(encoding="utf-8"))
        best = summary["best_config"]
        assert best["M"] in (2, 4) and best["K"] in (3, 5) and best["I"] in (1, 2, 3)
        assert summary["evaluated"] == 12
        assert summary["headline"]["status"] == "n/a"
        assert summary["seed"] == 7
        feasible = df[df["feasible"]]
        assert summary["objective_hz"] == pytest.approx(feasible["objective_hz"].max(), rel=1e-8)

    def test_infeasible_exit(self, tmp_path, capsys):
        """Test exit status 3 after the table and summary are written."""
        out = tmp_path / "o.csv"
        code = main(["optimize", "--config", write_config(tmp_path, "threshold = 0.99\n"), "--out", str(out)])
        assert code == EXIT_INFEASIBLE
        assert "best_infeasible_row" in capsys.readouterr().err
        assert len(pd.read_csv(out)) == 2 * 2 * 3
        summary = json.loads((tmp_path / "o_summary.json").read_text(encoding="utf-8"))
        assert summary["status"] == "infeasible"
        assert summary["best_config"] is None
        assert summary["best_infeasible_row"]["feasible"] is False
        assert summary["headline"]["status"] == "n/a"

    def test_degenerate_rows_skipped(self, tmp_path):
        """Test that zero-overhead rows are left out and the search still finishes."""
        text = SMALL_CONFIG.replace("edge_counts = 2, 4", "edge_counts = 1, 2").replace(
            "memory_units = 1, 2, 3", "memory_units = 1, 2"
        )
        path = tmp_path / "zero.conf"
        path.write_text(text, encoding="utf-8")
        out = tmp_path / "o.csv"
        assert main(["optimize", "--config", str(path), "--out", str(out)]) == EXIT_OK
        df = pd.read_csv(out)
        assert len(df) == 6
        assert df[(df["M"] == 1) & (df["I"] == 1)].empty
        summary = json.loads((tmp_path / "o_summary.json").read_text(encoding="utf-8"))
        assert summary["rejected"] == [{"M": 1, "K": 3, "I": 1}, {"M": 1, "K": 5, "I": 1}]
        assert summary["evaluated"] == 6

    def test_queue_wait_summary(self, config_file, tmp_path):
        """Test the closed-form vs Markov discrepancy record next to the queue-wait table."""
        out = tmp_path / "queue.csv"
        assert main(["queue-wait", "--config", str(config_file), "--out", str(out)]) == EXIT_OK
        summary = json.loads((tmp_path / "queue_summary.json").read_text(encoding="utf-8"))
        assert set(summary["analytic_vs_markov"]) == {"literal", "full_sum"}
        assert summary["analytic_vs_markov"]["literal"]["degenerate_rows"] >= 1
        assert summary["grid_points"] == 3
        assert summary["seed"] == 7


class TestReproduceFigures:
    """Full pipeline determinism."""

    def test_byte_identical(self, config_file, tmp_path):
        """Test that two runs with the same seed give byte-identical files."""
        first, second = tmp_path / "a", tmp_path / "b"
        assert main(["reproduce-figures", "--config", str(config_file), "--out", str(first), "--workers", "1"]) == EXIT_OK
        assert main(["reproduce-figures", "--config", str(config_file), "--out", str(second), "--workers", "3"]) == EXIT_OK
        names = sorted(p.name for p in first.iterdir())
        assert names == [
            "decode_error.csv",
            "fidelity_sweep.csv",
            "optimize.csv",
            "optimize_summary.json",
            "queue_wait.csv",
            "queue_wait_summary.json",
        ]
        for name in names:
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_seed_changes_stochastic_tables(self, config_file, tmp_path):
        """Test that a different seed changes the simulated columns only."""
        first, second = tmp_path / "a", tmp_path / "b"
        main(["reproduce-figures", "--config", str(config_file), "--out", str(first)])
        main(["reproduce-figures", "--config", str(config_file), "--out", str(second), "--seed", "8"])
        a = pd.read_csv(first / "queue_wait.csv")
        b = pd.read_csv(second / "queue_wait.csv")
        assert (a["markov_wait_s"] == b["markov_wait_s"]).all()
        assert not (a.loc[a["I"] > 1, "des_wait_s"] == b.loc[b["I"] > 1, "des_wait_s"]).all()

    @pytest.mark.slow
    def test_reference_defaults_write_every_file(self, tmp_path):
        """Test the built-in grid end to end: no row is feasible, every file is still written."""
        cfg = ExperimentConfig().with_overrides(trials=10_000, served_target=10_000)
        summary = reproduce_figures(cfg, tmp_path, workers=4)
        assert (tmp_path / "optimize.csv").is_file()
        assert (tmp_path / "optimize_summary.json").is_file()
        table = pd.read_csv(tmp_path / "optimize.csv")
        assert len(table) == 2 * 3 * 9
        assert not table["feasible"].any()
        written = json.loads((tmp_path / "optimize_summary.json").read_text(encoding="utf-8"))
        assert written["status"] == summary["status"] == "infeasible"
        assert written["headline"]["status"] in ("pass", "fail")
        assert set(written["best_infeasible_row"]) >= {"edge_count", "num_qubits", "memory_units"}

    @pytest.mark.slow
    def test_reference_defaults_exit_status(self, tmp_path):
        """Test exit status 3 for reproduce-figures when nothing is feasible."""
        conf = tmp_path / "fast.conf"
        conf.write_text("trials = 10000\nserved_target = 10000\n", encoding="utf-8")
        code = main(["reproduce-figures", "--config", str(conf), "--out", str(tmp_path / "out")])
        assert code == EXIT_INFEASIBLE
        assert (tmp_path / "out" / "optimize.csv").is_file()
