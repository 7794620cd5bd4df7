"""Tests for the command-line interface."""

import re

import pytest

from src.disco_index.cli import app
from src.disco_index.config import settings
from src.disco_index.services.disco import POINTWISE_COLUMNS
from tests.conftest import RING_PARAMS

SUMMARY = re.compile(r"^[a-z_]+=\S+$")


def summary(output: str) -> dict[str, str]:
    """The ``key=value`` lines of a command's output."""
    return dict(
        line.split("=", 1) for line in output.splitlines() if SUMMARY.match(line.strip())
    )


def ramp_lines(output: str) -> list[str]:
    return [line for line in output.splitlines() if line.startswith("value=")]


@pytest.fixture
def all_noise(write_text):
    return write_text("noise.csv", "x0,label\n0,-1\n1,-1\n2,-1\n3,-1\n")


class TestScore:
    def test_all_noise_scores_minus_one(self, runner, all_noise) -> None:
        result = runner.invoke(
            app, ["score", "--data", str(all_noise), "--label-column", "label", "--mu", "2"]
        )
        assert result.exit_code == 0
        assert summary(result.stdout)["disco"] == "-1.0"

    def test_one_cluster_scores_zero(self, runner, write_text) -> None:
        path = write_text("one.csv", "x0,label\n0,7\n1,7\n2,7\n3,7\n")
        result = runner.invoke(
            app, ["score", "-d", str(path), "--label-column", "label", "--mu", "2"]
        )
        assert result.exit_code == 0
        assert summary(result.stdout)["disco"] == "0.0"
        assert summary(result.stdout)["clusters"] == "1"

    def test_generated_rings(self, runner) -> None:
        params = [arg for key, value in RING_PARAMS.items() for arg in ("-p", f"{key}={value}")]
        result = runner.invoke(app, ["score", "-g", "rings_with_noise", *params, "--seed", "3"])
        assert result.exit_code == 0
        values = summary(result.stdout)
        assert 0.3 < float(values["disco"]) <= 1.0
        assert values["noise"] == "600"
        assert float(values["mean_rho_sparse"]) > 0

    def test_separate_label_file(self, runner, write_text) -> None:
        data = write_text("points.csv", "0\n1\n2\n10\n11\n12\n")
        labels = write_text("labels.csv", "0\n0\n0\n1\n1\n1\n")
        result = runner.invoke(
            app,
            ["score", "-d", str(data), "--no-header", "--labels", str(labels), "--mu", "2"],
        )
        assert result.exit_code == 0
        assert float(summary(result.stdout)["disco"]) > 0.5

    def test_pointwise_csv(self, runner, all_noise, tmp_path) -> None:
        out = tmp_path / "pointwise.csv"
        result = runner.invoke(
            app,
            [
                "score",
                "-d",
                str(all_noise),
                "--label-column",
                "label",
                "--mu",
                "2",
                "--pointwise",
                str(out),
            ],
        )
        assert result.exit_code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == ",".join(POINTWISE_COLUMNS)
        assert len(lines) == 5

    def test_generated_csv_scores_like_the_generator(self, runner, tmp_path) -> None:
        out = tmp_path / "moons.csv"
        generated = runner.invoke(
            app, ["generate", "-g", "two_moons", "-o", str(out), "-p", "jitter=0.05"]
        )
        assert generated.exit_code == 0
        assert summary(generated.stdout)["n"] == "200"
        from_file = runner.invoke(app, ["score", "-d", str(out), "--label-column", "label"])
        direct = runner.invoke(app, ["score", "-g", "two_moons", "-p", "jitter=0.05"])
        assert summary(from_file.stdout)["disco"] == summary(direct.stdout)["disco"]


class TestExitCodes:
    def test_missing_file(self, runner, tmp_path) -> None:
        result = runner.invoke(app, ["score", "-d", str(tmp_path / "absent.csv")])
        assert result.exit_code == 2

    def test_ragged_csv(self, runner, write_text) -> None:
        path = write_text("ragged.csv", "x0,x1,label\n1,2,0\n3,0\n")
        result = runner.invoke(app, ["score", "-d", str(path), "--label-column", "label"])
        assert result.exit_code == 2

    def test_label_count_mismatch(self, runner, write_text) -> None:
        data = write_text("points.csv", "0\n1\n2\n3\n")
        labels = write_text("labels.csv", "0\n0\n1\n")
        result = runner.invoke(
            app, ["score", "-d", str(data), "--no-header", "--labels", str(labels), "--mu", "1"]
        )
        assert result.exit_code == 3

    def test_no_labels(self, runner, write_text) -> None:
        path = write_text("points.csv", "x0\n0\n1\n2\n")
        result = runner.invoke(app, ["score", "-d", str(path), "--mu", "1"])
        assert result.exit_code == 3

    @pytest.mark.parametrize("mu", ["0", "4"])
    def test_mu_out_of_range(self, runner, all_noise, mu: str) -> None:
        result = runner.invoke(
            app, ["score", "-d", str(all_noise), "--label-column", "label", "--mu", mu]
        )
        assert result.exit_code == 4

    def test_both_data_sources(self, runner, all_noise) -> None:
        result = runner.invoke(app, ["score", "-d", str(all_noise), "-g", "blobs"])
        assert result.exit_code == 4

    def test_no_data_source(self, runner) -> None:
        assert runner.invoke(app, ["score"]).exit_code == 4

    def test_param_without_generator(self, runner, all_noise) -> None:
        result = runner.invoke(app, ["score", "-d", str(all_noise), "-p", "jitter=0.1"])
        assert result.exit_code == 4

    def test_sweep_needs_exactly_one_list(self, runner) -> None:
        result = runner.invoke(
            app, ["sweep", "-g", "blobs", "--eps-list", "1", "--k-list", "2,3"]
        )
        assert result.exit_code == 4


class TestSweep:
    args = ["sweep", "-g", "blobs", "-p", "points_per_cluster=40", "--eps-list", "0.05,0.3,1,5"]

    def test_reports_best_setting_and_pcc(self, runner, tmp_path) -> None:
        out = tmp_path / "sweep.csv"
        result = runner.invoke(app, [*self.args, "--out", str(out)])
        assert result.exit_code == 0
        values = summary(result.stdout)
        assert {"best_eps", "best_clusters", "best_disco", "pcc"} <= values.keys()
        header = out.read_text(encoding="utf-8").splitlines()[0]
        assert header == "eps,clusters,noise,disco,ari,best"

    def test_output_does_not_depend_on_threads(
        self, runner, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        monkeypatch.setattr(settings, "threads", 1)
        single = runner.invoke(app, self.args)
        monkeypatch.setattr(settings, "threads", 4)
        pooled = runner.invoke(app, self.args)
        assert single.exit_code == pooled.exit_code == 0
        assert summary(single.stdout) == summary(pooled.stdout)

    def test_k_sweep(self, runner) -> None:
        result = runner.invoke(
            app, ["sweep", "-g", "blobs", "-p", "n_clusters=2", "--k-list", "2,3,4"]
        )
        assert result.exit_code == 0
        assert summary(result.stdout)["best_k"] == "2.0"


class TestAblate:
    source = [
        "-g",
        "two_moons",
        "-p",
        "points_per_cluster=100",
        "-p",
        "jitter=0.05",
        "-p",
        "noise_points=20",
    ]

    @pytest.mark.parametrize("standardize", ["per-feature", "global", "none"])
    def test_swap_zero_matches_score(self, runner, standardize: str) -> None:
        flags = [*self.source, "--standardize", standardize]
        ablate = runner.invoke(app, ["ablate", "--ramp", "swap", "--values", "0,0.1", *flags])
        assert ablate.exit_code == 0
        rows = ramp_lines(ablate.stdout)
        assert len(rows) == 2
        scored = runner.invoke(app, ["score", *flags])
        assert rows[0].startswith(f"value=0.0 disco={summary(scored.stdout)['disco']} ")

    def test_labels_need_data(self, runner, write_text) -> None:
        labels = write_text("labels.csv", "0\n1\n")
        result = runner.invoke(
            app, ["ablate", "--ramp", "swap", *self.source, "--labels", str(labels)]
        )
        assert result.exit_code == 4
        default = runner.invoke(app, ["ablate", "--ramp", "swap", "--label-column", "label"])
        assert default.exit_code == 4

    def test_noise_distance_reports_rho_terms(self, runner) -> None:
        result = runner.invoke(app, ["ablate", "-r", "noise_distance", "--values", "6"])
        assert result.exit_code == 0
        (row,) = ramp_lines(result.stdout)
        assert "rho_far=None" not in row

    def test_unknown_ramp(self, runner) -> None:
        assert runner.invoke(app, ["ablate", "--ramp", "spin"]).exit_code == 2


def test_correlate(runner) -> None:
    result = runner.invoke(
        app,
        [
            "correlate",
            "-g",
            "blobs",
            "-p",
            "n_clusters=2",
            "--eps-list",
            "0.1,0.5",
            "--k-list",
            "2,3",
        ],
    )
    assert result.exit_code == 0
    values = summary(result.stdout)
    assert values["clusterings"] == "6"
    assert float(values["pcc"]) > 0


def test_probe(runner) -> None:
    result = runner.invoke(
        app, ["probe", "-g", "uniform_balls", "-p", "n_clusters=1", "-p", "probe_distance=6"]
    )
    assert result.exit_code == 0
    values = summary(result.stdout)
    assert values["probed"] == "100"
    assert float(values["noise_mean"]) > float(values["probe_mean"])


def test_config(runner) -> None:
    result = runner.invoke(app, ["config"])
    assert result.exit_code == 0
    values = summary(result.stdout)
    assert values["mu"] == str(settings.mu)
    assert values["standardize"] == settings.standardize.value
