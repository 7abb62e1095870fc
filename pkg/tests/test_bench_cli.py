import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from causal_paths.bench import RunConfig, render_csv_files, run_benchmark, to_csv
from causal_paths.cli import main
from causal_paths.criteria import Method
from causal_paths.dataset import Direction, load_directory, write_pairs
from causal_paths.errors import ConfigurationError
from causal_paths.metrics import ConfusionMatrix, summarize
from causal_paths.synth import generate_suite


@pytest.fixture(scope="module")
def suite_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("suite")
    assert main(["synth", "--count", "8", "--n", "120", "--seed", "4", "--out", str(out)]) == 0
    return out


def bench_args(suite_dir, *extra):
    return ["bench", "--data-dir", str(suite_dir), "--meta", str(suite_dir / "pairmeta.txt"), "--boot-iters", "3", *extra]


class TestDecide:
    def test_text_output(self, suite_dir, capsys):
        assert main(["decide", str(suite_dir / "synth0000.txt"), "--boot-iters", "4"]) == 0
        out = capsys.readouterr().out
        for label in ("M1_gradient", "M2_residual", "M3_gencorr", "M4_cam", "ensemble (leader M2)", "p_cause:"):
            assert label in out

    def test_method_subset(self, suite_dir, capsys):
        assert main(["decide", str(suite_dir / "synth0001.txt"), "--methods", "M2,M3,M4", "--leader", "M2",
                     "--format", "json", "--boot-iters", "0"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert "M1_score_xy" not in doc and "M4_score_xy" in doc
        assert doc["p_cause"] is None and doc["votes_xy"] + doc["votes_yx"] == 3

    def test_constant_column(self, tmp_path, capsys):
        f = tmp_path / "const.txt"
        f.write_text("1 5\n2 5\n3 5\n4 5\n")
        assert main(["decide", str(f)]) == 2
        assert "column 2 (y) is constant" in capsys.readouterr().err

    def test_usage_errors(self, suite_dir, tmp_path, capsys):
        pf = str(suite_dir / "synth0000.txt")
        assert main(["decide", pf, "--methods", "M2,M3", "--leader", "M4"]) == 1
        assert main(["decide", pf, "--cols", "1,7"]) == 1
        assert main(["decide", str(tmp_path / "missing.txt")]) == 1
        with pytest.raises(SystemExit) as exc:
            main(["decide", pf, "--methods", "M9"])
        assert exc.value.code == 1


class TestBench:
    def test_csv_outputs_self_consistent(self, suite_dir, tmp_path):
        out = tmp_path / "o"
        assert main(bench_args(suite_dir, "--out", str(out))) == 0
        names = {p.name for p in out.iterdir()}
        assert {"records.csv", "table1_methods.csv", "table2_ensembles.csv", "table3_filters.csv",
                "table4_correlation.csv", "sweep_n_observations.csv", "pcause.csv", "skipped.csv"} <= names
        records = list(csv.DictReader(io.StringIO((out / "records.csv").read_text())))
        assert len(records) == 8
        table1 = {r["label"]: r for r in csv.DictReader(io.StringIO((out / "table1_methods.csv").read_text()))}
        for m in ("M1", "M2", "M3", "M4"):
            counts = dict(tp=0, fn=0, fp=0, tn=0)
            for r in records:
                pos_truth = r["ground_truth"] == "XtoY"
                pos_pred = r[f"{m}_decision"] == "XtoY"
                key = ("tp" if pos_pred else "fn") if pos_truth else ("fp" if pos_pred else "tn")
                counts[key] += 1
            expected = summarize(ConfusionMatrix(**counts))
            for k in ("tp", "fn", "fp", "tn"):
                assert int(table1[m][k]) == expected[k]
            assert table1[m]["accuracy"] == f"{expected['accuracy']:.4f}"
        ens = [r["correct"] == "true" for r in records]
        filt = list(csv.DictReader(io.StringIO((out / "table3_filters.csv").read_text())))
        assert filt[0]["accuracy"] == f"{sum(ens) / len(ens):.4f}"

    def test_crlf_and_quoting(self):
        text = to_csv([{"label": 'a,"b"', "v": 0.123456, "w": None, "t": True}])
        assert text == 'label,v,w,t\r\n"a,""b""",0.1235,NA,true\r\n'

    def test_json_keys(self, suite_dir, tmp_path):
        out = tmp_path / "j"
        assert main(bench_args(suite_dir, "--format", "json", "--out", str(out))) == 0
        doc = json.loads((out / "bench.json").read_text())
        assert set(doc) == {"config", "records", "summaries"}
        assert {"methods", "ensembles", "filters", "correlation", "sweep_n", "pcause", "skipped"} <= set(doc["summaries"])
        labels = [r["label"] for r in doc["summaries"]["ensembles"]]
        assert "All (leader M3)" in labels and "M2+M3+M4" in labels and len(labels) == 8

    def test_single_pair_renders_na(self, tmp_path):
        (tmp_path / "one.txt").write_text("".join(f"{i} {i * i % 7 + 0.1 * i}\n" for i in range(20)))
        (tmp_path / "meta.txt").write_text("one 1 1 2 2 1\n")
        out = tmp_path / "o"
        assert main(["bench", "--data-dir", str(tmp_path), "--meta", str(tmp_path / "meta.txt"),
                     "--boot-iters", "2", "--out", str(out)]) == 0
        row = next(csv.DictReader(io.StringIO((out / "table1_methods.csv").read_text())))
        assert row["specificity"] == "NA" and row["kappa"] == "NA" and row["balanced_accuracy"] == "NA"

    def test_empty_dataset_exit_3(self, tmp_path, capsys):
        # multivariate cause block: excluded, leaving nothing
        (tmp_path / "pair1.txt").write_text("1 2 3\n2 3 1\n3 1 2\n4 4 4\n")
        (tmp_path / "meta.txt").write_text("pair1 1 2 3 3 1\n")
        assert main(["bench", "--data-dir", str(tmp_path), "--meta", str(tmp_path / "meta.txt")]) == 3
        assert "no pairs" in capsys.readouterr().err

    def test_workers_match_serial(self):
        pairs = generate_suite(4, base_seed=2, n=80)
        a = run_benchmark(pairs, RunConfig(bootstrap_iterations=2))
        b = run_benchmark(pairs, RunConfig(bootstrap_iterations=2, workers=2))
        assert render_csv_files(a) == render_csv_files(b)

    def test_config_validation(self):
        with pytest.raises(ConfigurationError):
            RunConfig(methods=(Method.M2,), leader=Method.M3)
        with pytest.raises(ConfigurationError):
            RunConfig(pcause_threshold=1.5)
        with pytest.raises(ConfigurationError):
            RunConfig(output_format="xml")
        with pytest.raises(ConfigurationError):
            RunConfig(bandwidth="magic")

    def test_degenerate_pair_skipped(self, tmp_path):
        (tmp_path / "ok.txt").write_text("".join(f"{i} {np.sin(i)}\n" for i in range(30)))
        (tmp_path / "flat.txt").write_text("".join(f"{i} 2\n" for i in range(30)))
        (tmp_path / "meta.txt").write_text("ok 1 1 2 2 1\nflat 1 1 2 2 1\n")
        loaded = load_directory(tmp_path, tmp_path / "meta.txt")
        res = run_benchmark(loaded.pairs, RunConfig(bootstrap_iterations=0))
        assert [r.pair_id for r in res.records] == ["ok"]
        assert res.skipped[0].pair_id == "flat" and "degenerate" in res.skipped[0].reason


class TestSynthConvert:
    def test_synth_files_and_roundtrip(self, suite_dir):
        assert len(list(suite_dir.glob("synth*.txt"))) == 8
        loaded = load_directory(suite_dir, suite_dir / "pairmeta.txt")
        assert len(loaded.pairs) == 8 and not loaded.skipped
        truths = {p.id: p.ground_truth for p in loaded.pairs}
        for p in generate_suite(8, base_seed=4, n=120, cause_dist="gaussian"):
            assert truths[p.id] is p.ground_truth

    def test_synth_reproducible(self, suite_dir, tmp_path):
        assert main(["synth", "--count", "8", "--n", "120", "--seed", "4", "--out", str(tmp_path)]) == 0
        for f in suite_dir.iterdir():
            assert (tmp_path / f.name).read_bytes() == f.read_bytes()

    def test_convert(self, tmp_path):
        pairs_csv = "SampleID,A,B\np1,1 2 3 4,2 4 6 9\np2,1 2 3,3 2 1\np3,1 2 3,1 1 2\n"
        targets_csv = "SampleID,Target\np1,1\np2,-1\np3,0\n"
        (tmp_path / "pairs.csv").write_text(pairs_csv)
        (tmp_path / "targets.csv").write_text(targets_csv)
        out = tmp_path / "o"
        assert main(["convert", "--pairs", str(tmp_path / "pairs.csv"), "--targets", str(tmp_path / "targets.csv"),
                     "--out", str(out)]) == 0
        loaded = load_directory(out, out / "pairmeta.txt")
        got = {p.id: p.ground_truth for p in loaded.pairs}
        assert got == {"p1": Direction.XtoY, "p2": Direction.YtoX}


def test_console_entry_point(suite_dir):
    proc = subprocess.run([sys.executable, "-m", "causal_paths.cli", "decide", str(suite_dir / "synth0002.txt"),
                           "--boot-iters", "0"], capture_output=True, text=True)
    assert proc.returncode == 0 and "M4_cam" in proc.stdout
