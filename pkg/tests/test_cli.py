import json

import numpy as np
import pytest

from shrunkclust.cli import export_report, main, run_cluster, run_sweep
from shrunkclust.datasets import Dataset, make_blobs, save_dataset
from shrunkclust.exceptions import ParameterError


@pytest.fixture(scope="module")
def blob_files(tmp_path_factory):
    root = tmp_path_factory.mktemp("data")
    x, y = make_blobs(n=60, d=3, c=2, std=0.4, sep=10.0, seed=0)
    return save_dataset(x, y, root / "blobs")


@pytest.fixture(scope="module")
def blob_dataset():
    x, y = make_blobs(n=60, d=3, c=2, std=0.4, sep=10.0, seed=0)
    return Dataset(x=x, labels=y, name="blobs")


def strip_wall_time(payload):
    for report in payload:
        report.pop("wall_time")
    return payload


class TestRunCluster:
    def test_kmeans_on_blobs(self, blob_dataset):
        report = run_cluster(blob_dataset, "kmeans",
                             {"clusters": 2, "restarts": 10}, seed=0)
        assert report.acc == 1.0
        assert report.nmi == 1.0
        assert report.trace is None
        assert report.converged is True

    def test_ssc_vanishing_gamma_matches_sc(self, blob_dataset):
        params = {"clusters": 2, "restarts": 10, "gamma": 1e-12}
        ssc = run_cluster(blob_dataset, "ssc", params, seed=3)
        sc = run_cluster(blob_dataset, "sc", {"clusters": 2, "restarts": 10},
                         seed=3)
        assert ssc.acc == sc.acc
        assert ssc.trace is not None

    def test_replay_identical_modulo_wall_time(self, blob_dataset):
        params = {"clusters": 2, "restarts": 5}
        a = run_cluster(blob_dataset, "ssc", params, seed=1).to_dict()
        b = run_cluster(blob_dataset, "ssc", params, seed=1).to_dict()
        a.pop("wall_time"), b.pop("wall_time")
        assert a == b

    def test_unknown_method(self, blob_dataset):
        with pytest.raises(ParameterError):
            run_cluster(blob_dataset, "dbscan", {"clusters": 2})

    def test_missing_clusters(self, blob_dataset):
        with pytest.raises(ParameterError):
            run_cluster(blob_dataset, "kmeans", {})

    def test_no_labels_no_metrics(self, blob_dataset):
        ds = Dataset(x=blob_dataset.x, labels=None, name="anon")
        report = run_cluster(ds, "kmeans", {"clusters": 2, "restarts": 5})
        assert report.acc is None and report.nmi is None


class TestRunSweep:
    def test_singleton_grid_matches_run_cluster(self, blob_dataset):
        params = {"clusters": 2, "restarts": 5}
        sweep = run_sweep(blob_dataset, [1.0], params, seed=0)
        single = run_cluster(blob_dataset, "ssc",
                             {**params, "gamma": 1.0}, seed=0)
        assert len(sweep) == 1
        a, b = sweep[0].to_dict(), single.to_dict()
        a.pop("wall_time"), b.pop("wall_time")
        assert a == b

    def test_default_grid_monotone_traces(self, blob_dataset):
        params = {"clusters": 2, "restarts": 5, "max_iter": 60}
        reports = run_sweep(blob_dataset, (1e-6, 1e-3, 1.0, 1e3, 1e6),
                            params, seed=0)
        assert len(reports) == 5
        for rep in reports:
            values = [j for _, j in rep.trace]
            for prev, cur in zip(values, values[1:]):
                assert cur <= prev * (1 + 1e-6) + 1e-9

    def test_nonpositive_gamma_rejected(self, blob_dataset):
        with pytest.raises(ParameterError):
            run_sweep(blob_dataset, [1.0, -2.0], {"clusters": 2}, seed=0)
        with pytest.raises(ParameterError):
            run_sweep(blob_dataset, [], {"clusters": 2}, seed=0)


class TestExportReport:
    def test_empty_json(self, tmp_path):
        out = tmp_path / "r.json"
        export_report([], out, "json")
        assert out.read_text().strip() == "[]"

    def test_csv_trace_lines(self, blob_dataset, tmp_path):
        report = run_cluster(blob_dataset, "ssc",
                             {"clusters": 2, "restarts": 3}, seed=0)
        out = tmp_path / "trace.csv"
        export_report([report], out, "csv")
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "iteration,objective"
        assert len(lines) == len(report.trace) + 1

    def test_json_roundtrip(self, blob_dataset, tmp_path):
        reports = [run_cluster(blob_dataset, m, {"clusters": 2, "restarts": 3},
                               seed=0) for m in ("kmeans", "sc", "ssc")]
        out = tmp_path / "r.json"
        export_report(reports, out, "json")
        parsed = json.loads(out.read_text())
        want = [r.to_dict() for r in reports]
        assert parsed == want


class TestMainEndToEnd:
    def test_cluster_exit_zero_and_determinism(self, blob_files, tmp_path, capsys):
        mpath, lpath = blob_files
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        argv = ["cluster", str(mpath), "--labels", str(lpath),
                "--clusters", "2", "--method", "ssc", "--restarts", "5",
                "--seed", "7"]
        assert main(argv + ["--out", str(out1)]) == 0
        assert main(argv + ["--out", str(out2)]) == 0
        a = strip_wall_time(json.loads(out1.read_text()))
        b = strip_wall_time(json.loads(out2.read_text()))
        assert a == b

    def test_synth_then_bench(self, tmp_path, capsys):
        prefix = tmp_path / "data" / "blobs"
        assert main(["synth", "--kind", "blobs", "--samples", "45",
                     "--features", "3", "--clusters", "3", "--std", "0.3",
                     "--seed", "1", "--out", str(prefix)]) == 0
        out = tmp_path / "bench.json"
        code = main(["bench", str(prefix) + ".csv",
                     "--labels", str(prefix) + ".labels.csv",
                     "--clusters", "3", "--repeats", "2", "--restarts", "4",
                     "--methods", "kmeans,sc,ssc", "--out", str(out)])
        assert code == 0
        payload = json.loads(out.read_text())
        assert len(payload) == 6
        assert {r["method"] for r in payload} == {"kmeans", "sc", "ssc"}
        stdout = capsys.readouterr().out
        assert "kmeans" in stdout and "ACC" in stdout

    def test_sweep_cli(self, blob_files, tmp_path, capsys):
        mpath, lpath = blob_files
        out = tmp_path / "sweep.json"
        code = main(["sweep", str(mpath), "--labels", str(lpath),
                     "--clusters", "2", "--restarts", "3",
                     "--gamma-grid", "0.001,1,1000", "--out", str(out)])
        assert code == 0
        payload = json.loads(out.read_text())
        assert [r["params"]["gamma"] for r in payload] == [0.001, 1.0, 1000.0]
        assert "gamma" in capsys.readouterr().out

    def test_usage_error_exit_one(self, capsys):
        assert main(["cluster", "nope.csv"]) == 1  # missing --clusters

    def test_data_error_exit_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("1,2\n3,oops\n")
        assert main(["cluster", str(bad), "--clusters", "2"]) == 2

    def test_missing_file_exit_two(self, capsys):
        assert main(["cluster", "/nonexistent/x.csv", "--clusters", "2"]) == 2

    def test_unknown_bench_method_exit_one(self, blob_files, capsys):
        mpath, _ = blob_files
        assert main(["bench", str(mpath), "--clusters", "2",
                     "--methods", "kmeans,magic"]) == 1
