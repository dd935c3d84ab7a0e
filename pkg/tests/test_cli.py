import csv
import json

import pytest

from main import main, parse_args
from mms_sampler.core import Solution, read_jsonl, save_instance
from mms_sampler.diagnostics import KernelKind, build_kernel, spectral_report


@pytest.fixture(autouse=True)
def no_env_defaults(monkeypatch):
    for name in ("MMS_SAMPLER_SEED", "MMS_SAMPLER_ALGORITHM", "MMS_SAMPLER_WORKERS"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def disconnected_file(tmp_path):
    path = tmp_path / "block.json"
    assert main(["gen", "--kind", "disconnected_example", "--out", str(path)]) == 0
    return path


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def test_enumerate_disconnected_block(disconnected_file, tmp_path, capsys):
    assert main(["enumerate", str(disconnected_file)]) == 0
    out = capsys.readouterr().out
    assert "2 solution(s), complete=True" in out
    assert "0 0 0 3" in out

    target = tmp_path / "solutions.jsonl"
    assert main(["enumerate", str(disconnected_file), "--out", str(target)]) == 0
    records = list(read_jsonl(target))
    assert [r["x"] for r in records[:-1]] == [[0, 0, 0, 3], [1, 1, 1, 0]]
    assert records[-1] == {"complete": True, "count": 2, "bound_gap": None}


def test_enumerate_top_reports_gap(disconnected_file, capsys):
    assert main(["enumerate", str(disconnected_file), "--mode", "top", "--top-n", "1"]) == 0
    out = capsys.readouterr().out
    assert "complete=False" in out
    assert "bound gap" in out


def test_analyze_components(disconnected_file, tmp_path):
    target = tmp_path / "analyze.csv"
    assert main(["analyze", str(disconnected_file), "--k", "2", "3", "--out", str(target)]) == 0
    rows = read_csv(target)
    assert [(r["param"], r["components"]) for r in rows] == [("k=2", "2"), ("k=3", "1")]
    assert rows[0]["n_upper"] == ""
    assert float(rows[1]["lambda2"]) == pytest.approx(0.5)


def test_analyze_simple_chain_starts_from_empty_multiset(block_b, tmp_path):
    path = tmp_path / "block_b.json"
    save_instance(block_b, path)
    target = tmp_path / "simple.csv"
    args = ["analyze", str(path), "--kind", "simple", "--gammas", "1.0", "--out", str(target)]
    assert main(args) == 0
    (row,) = read_csv(target)

    kernel = build_kernel(block_b, KernelKind.simple(1.0))
    expected = spectral_report(kernel, Solution.zeros(block_b.num_types_n))
    assert float(row["n_upper"]) == pytest.approx(expected.n_upper)
    assert float(row["n_lower"]) == pytest.approx(expected.n_lower)


def test_unknown_flag_is_a_usage_error(disconnected_file):
    with pytest.raises(SystemExit) as excinfo:
        main(["enumerate", str(disconnected_file), "--bogus"])
    assert excinfo.value.code == 2


def test_randomized_commands_need_a_seed(disconnected_file, tmp_path, capsys):
    assert main(["sample", str(disconnected_file)]) == 2
    assert "--seed" in capsys.readouterr().err
    assert main(["gen", "--kind", "random", "--out", str(tmp_path / "r.json")]) == 2
    assert main(["sample", str(disconnected_file), "--ephemeral"]) == 0


def test_seed_from_environment(disconnected_file, monkeypatch, capsys):
    monkeypatch.setenv("MMS_SAMPLER_SEED", "5")
    assert parse_args(["sample", str(disconnected_file)]).seed == 5
    assert main(["sample", str(disconnected_file)]) == 0

    monkeypatch.setenv("MMS_SAMPLER_SEED", "five")
    with pytest.raises(SystemExit) as excinfo:
        main(["sample", str(disconnected_file)])
    assert excinfo.value.code == 2
    assert "--seed" in capsys.readouterr().err

    monkeypatch.delenv("MMS_SAMPLER_SEED")
    monkeypatch.setenv("MMS_SAMPLER_WORKERS", "many")
    with pytest.raises(SystemExit) as excinfo:
        main(["batch", str(disconnected_file), "--out", "unused", "--seed", "1"])
    assert excinfo.value.code == 2


def test_missing_ranges(tmp_path):
    out = tmp_path / "rect.json"
    assert main(["gen", "--kind", "hyperrectangle", "--seed", "1", "--out", str(out)]) == 2


def test_sampling_is_reproducible(disconnected_file, tmp_path):
    outputs = []
    for run in range(2):
        target = tmp_path / f"run{run}.jsonl"
        argv = [
            "sample", str(disconnected_file), "--seed", "5", "--algorithm", "reduced",
            "--k", "3", "--t", "10", "--samples", "20", "--out", str(target),
        ]
        assert main(argv) == 0
        outputs.append(target.read_text(encoding="utf-8"))
    assert outputs[0] == outputs[1]


def test_config_file_fills_defaults(disconnected_file, tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"algorithm": "reduced", "t": 7, "seed": 4}), encoding="utf-8")
    args = parse_args(["sample", str(disconnected_file), "--config", str(config), "--t", "3"])
    assert args.algorithm == "reduced"
    assert args.seed == 4
    assert args.t == 3

    config.write_text(json.dumps({"temperature": 2}), encoding="utf-8")
    with pytest.raises(SystemExit) as excinfo:
        parse_args(["sample", str(disconnected_file), "--config", str(config)])
    assert excinfo.value.code == 2


def run_pipeline(tmp_path, tag):
    blocks = tmp_path / "blocks"
    if not blocks.exists():
        assert main(["gen", "--kind", "example1", "--b-copies", "2", "--out", str(blocks)]) == 0
    results = tmp_path / f"results_{tag}"
    argv = [
        "batch", str(blocks), "--out", str(results), "--seed", "7",
        "--algorithm", "reduced", "--t", "5", "--samples", "3",
    ]
    assert main(argv) == 0
    evaluation = tmp_path / f"eval_{tag}"
    argv = ["evaluate", str(blocks), str(results), "--projection", "example1", "--out", str(evaluation)]
    assert main(argv) == 0
    return results, evaluation


def test_batch_then_evaluate(tmp_path):
    results, evaluation = run_pipeline(tmp_path, "a")
    assert sorted(p.name for p in results.glob("*.jsonl")) == [
        "block_A.jsonl", "block_B.jsonl", "block_B2.jsonl", "block_C.jsonl",
    ]
    (summary,) = read_csv(evaluation / "summary.csv")
    assert summary["runs"] == "3"
    assert summary["blocks"] == "4"
    types = read_csv(evaluation / "types.csv")
    assert [row["label"] for row in types] == ["0-2", "1-1", "2-0"]
    assert set(types[0]) == {"label", "p", "qhat", "p_lambda"}

    again, evaluation_again = run_pipeline(tmp_path, "b")
    for path in results.glob("*.jsonl"):
        assert (again / path.name).read_text() == path.read_text()
    assert (evaluation / "summary.csv").read_text() == (evaluation_again / "summary.csv").read_text()


def test_batch_reports_failed_blocks(tmp_path, capsys):
    blocks = tmp_path / "blocks"
    assert main(["gen", "--kind", "example1", "--out", str(blocks)]) == 0
    (blocks / "broken.json").write_text("[]", encoding="utf-8")
    argv = ["batch", str(blocks), "--out", str(tmp_path / "res"), "--seed", "1", "--algorithm", "rejection"]
    assert main(argv) == 1
    assert "❌ broken" in capsys.readouterr().out
