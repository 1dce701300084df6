import os

import numpy as np
import pytest

from _datasets import redundant_groups, write_csv
from sepselect.cli import main


@pytest.fixture(scope="module")
def csv_path(tmp_path_factory):
    d, _ = redundant_groups(
        n_instances=72,
        n_classes=3,
        group_sizes=[3, 3, 2],
        strengths=[2.0, 2.0, 1.5],
        noise=0.35,
        seed=5,
    )
    path = tmp_path_factory.mktemp("data") / "toy.csv"
    write_csv(str(path), d)
    return str(path)


def _select_args(csv_path, outdir, extra=()):
    return [
        "select",
        "--input", csv_path,
        "--label", "label",
        "--seed", "11",
        "--perplexity", "4",
        "--tsne-iterations", "120",
        "--folds", "4",
        "--output-dir", outdir,
        *extra,
    ]


class TestSelect:
    def test_happy_path_writes_artifacts(self, csv_path, tmp_path, capsys):
        outdir = str(tmp_path / "out")
        assert main(_select_args(csv_path, outdir)) == 0
        report = open(os.path.join(outdir, "report.txt")).read()
        assert "k_min:" in report
        assert "selected features" in report
        assert os.path.exists(os.path.join(outdir, "curve.csv"))
        assert os.path.exists(os.path.join(outdir, "embedding.csv"))
        assert os.path.exists(os.path.join(outdir, "timings.txt"))
        assert "k_min" in capsys.readouterr().out

    def test_reports_are_byte_identical_across_runs(self, csv_path, tmp_path):
        out1, out2 = str(tmp_path / "r1"), str(tmp_path / "r2")
        assert main(_select_args(csv_path, out1)) == 0
        assert main(_select_args(csv_path, out2)) == 0
        b1 = open(os.path.join(out1, "report.txt"), "rb").read()
        b2 = open(os.path.join(out2, "report.txt"), "rb").read()
        assert b1 == b2

    def test_k_max_restricts_curve(self, csv_path, tmp_path):
        outdir = str(tmp_path / "cap")
        assert main(_select_args(csv_path, outdir, ["--k-max", "5"])) == 0
        lines = open(os.path.join(outdir, "curve.csv")).read().strip().splitlines()
        ks = [int(line.split(",")[0]) for line in lines[1:]]
        assert ks == [2, 3, 4, 5]

    def test_plots_and_index_curves(self, csv_path, tmp_path):
        outdir = str(tmp_path / "plots")
        args = _select_args(csv_path, outdir, ["--plots", "--index-curves", "--k-max", "6"])
        assert main(args) == 0
        for name in ("curve.svg", "embedding.svg", "indices.svg"):
            content = open(os.path.join(outdir, name)).read()
            assert content.startswith("<svg")
        indices = open(os.path.join(outdir, "indices.csv")).read().splitlines()
        assert indices[0] == "k,silhouette,ss,mss"

    def test_missing_input_exits_2_and_names_path(self, tmp_path, capsys):
        outdir = str(tmp_path / "x")
        code = main(_select_args("/nope/missing.csv", outdir))
        assert code == 2
        assert "/nope/missing.csv" in capsys.readouterr().err

    def test_env_output_dir_honored(self, csv_path, tmp_path, monkeypatch):
        envdir = str(tmp_path / "from-env")
        monkeypatch.setenv("SEPSELECT_OUTPUT_DIR", envdir)
        args = [a for a in _select_args(csv_path, "ignored") if a != "ignored"]
        args.remove("--output-dir")
        assert main(args + ["--k-max", "5"]) == 0
        assert os.path.exists(os.path.join(envdir, "report.txt"))


class TestUsageErrors:
    def test_no_command(self, capsys):
        assert main([]) == 1
        assert "usage error" in capsys.readouterr().err

    def test_unknown_flag(self, csv_path):
        assert main(["select", "--input", csv_path, "--bogus"]) == 1

    def test_missing_required(self):
        assert main(["select", "--input", "x.csv"]) == 1


class TestBaselineCommand:
    @pytest.mark.parametrize("method", ["relieff", "fisher", "cfs", "random"])
    def test_each_method_emits_k_features(self, csv_path, method, capsys):
        args = [
            "baseline", "--input", csv_path, "--label", "label",
            "--seed", "3", "--method", method, "--k", "4",
            "--relieff-neighbors", "3",
        ]
        assert main(args) == 0
        out = capsys.readouterr().out
        assert out.startswith("#")  # reproduction echo
        lines = [l for l in out.splitlines() if l.strip() and not l.startswith("#")]
        assert len(lines) == 4
        indices = [int(l.split(",")[0]) for l in lines]
        assert len(set(indices)) == 4

    def test_subset_csv_written(self, csv_path, tmp_path):
        outdir = str(tmp_path / "base")
        args = [
            "baseline", "--input", csv_path, "--label", "label",
            "--seed", "3", "--method", "fisher", "--k", "3",
            "--output-dir", outdir,
        ]
        assert main(args) == 0
        content = open(os.path.join(outdir, "subset.csv")).read().splitlines()
        assert content[0] == "index,feature"
        assert len(content) == 4


class TestEvaluateCommand:
    def test_all_features(self, csv_path, capsys):
        args = [
            "evaluate", "--input", csv_path, "--label", "label",
            "--seed", "2", "--features", "all", "--neighbors", "3",
        ]
        assert main(args) == 0
        out = capsys.readouterr().out
        assert "accuracy:" in out and "balanced_f:" in out

    def test_subset_by_name_and_index(self, csv_path, capsys):
        args = [
            "evaluate", "--input", csv_path, "--label", "label",
            "--seed", "2", "--features", "f0,3", "--neighbors", "3",
        ]
        assert main(args) == 0
        assert "subset size: 2" in capsys.readouterr().out

    def test_unknown_feature_is_data_error(self, csv_path, capsys):
        args = [
            "evaluate", "--input", csv_path, "--label", "label",
            "--seed", "2", "--features", "nosuch",
        ]
        assert main(args) == 2
        assert "nosuch" in capsys.readouterr().err


class TestEmbedOnly:
    def test_embedding_and_z_export(self, csv_path, tmp_path):
        outdir = str(tmp_path / "emb")
        args = [
            "embed-only", "--input", csv_path, "--label", "label",
            "--seed", "4", "--perplexity", "4", "--tsne-iterations", "100",
            "--output-dir", outdir, "--export-z",
        ]
        assert main(args) == 0
        emb_lines = open(os.path.join(outdir, "embedding.csv")).read().splitlines()
        assert emb_lines[0] == "feature,x,y"
        assert len(emb_lines) == 9  # 8 features + header
        z_lines = open(os.path.join(outdir, "z.csv")).read().splitlines()
        assert z_lines[0].startswith("feature,pair_")
        assert len(z_lines[0].split(",")) == 1 + 9  # 3 classes -> 9 pair columns


class TestCompare:
    def test_small_comparison(self, csv_path, tmp_path, capsys):
        outdir = str(tmp_path / "cmp")
        args = [
            "compare", "--input", csv_path, "--label", "label",
            "--seed", "6", "--perplexity", "4", "--tsne-iterations", "100",
            "--folds", "4", "--repetitions", "2", "--neighbors", "3",
            "--relieff-neighbors", "3", "--output-dir", outdir,
        ]
        assert main(args) == 0
        text = open(os.path.join(outdir, "compare.txt")).read()
        assert "sepselect" in text
        assert "relieff" in text
        assert "time saving" in text
        out = capsys.readouterr().out
        assert "method comparison" in out
