import json

import numpy as np
import pytest

from gapfill import cli, harness


@pytest.fixture
def wav(tmp_path):
    t = np.arange(6000)
    x = 0.3 * np.sin(2 * np.pi * 0.02 * t)
    path = tmp_path / "in.wav"
    harness.write_wav(path, x, 8000, "pcm16")
    return path, x


def test_inpaint_fills_only_the_gap(tmp_path, wav):
    path, _ = wav
    out = tmp_path / "out.wav"
    code = cli.main(["inpaint", str(path), "-o", str(out), "--gap", "3001:40",
                     "--weights", "energy", "--max-iterations", "30"])
    assert code == cli.EXIT_OK
    before, _ = harness.read_wav(path)
    after, rate = harness.read_wav(out)
    assert rate == 8000 and harness.wav_format(out) == "pcm16"
    keep = np.ones(len(before), bool)
    keep[3000:3040] = False
    np.testing.assert_array_equal(after[keep], before[keep])


def test_inpaint_with_gap_file_and_janssen(tmp_path, wav):
    path, _ = wav
    gaps = tmp_path / "gaps.json"
    harness.save_gap_file(gaps, [harness.parse_gap("2000:20")], 8000)
    code = cli.main(["inpaint", str(path), "-o", str(tmp_path / "o.wav"), "--gap-file",
                     str(gaps), "--method", "janssen"])
    assert code == cli.EXIT_OK


@pytest.mark.parametrize("extra", [
    [],                                   # no gap
    ["--gap", "10"],                      # malformed gap
    ["--gap", "100:50", "--gap", "120:10"],  # overlapping gaps
    ["--gap", "5990:50"],                 # past the end
    ["--gap", "100:50", "--tdc", "--offset", "none"],
    ["--gap", "100:50", "--model", "lasso"],
])
def test_inpaint_usage_errors(tmp_path, wav, extra):
    path, _ = wav
    assert cli.main(["inpaint", str(path), "-o", str(tmp_path / "o.wav")] + extra) == cli.EXIT_USAGE


def test_inpaint_io_errors(tmp_path, wav):
    path, _ = wav
    missing = str(tmp_path / "nope.wav")
    assert cli.main(["inpaint", missing, "-o", str(tmp_path / "o.wav"),
                     "--gap", "1:2"]) == cli.EXIT_IO
    assert cli.main(["inpaint", str(path), "-o", str(tmp_path / "o.wav"),
                     "--gap-file", str(tmp_path / "none.json")]) == cli.EXIT_IO
    assert cli.main(["inpaint", str(path), "-o", str(tmp_path / "no" / "dir.wav"),
                     "--gap", "3001:40", "--max-iterations", "5"]) == cli.EXIT_IO


def test_inpaint_numerical_failure(tmp_path, wav, monkeypatch):
    path, _ = wav

    def broken(signal, gaps, method, settings):
        return np.full_like(signal, np.nan), []

    monkeypatch.setattr(cli, "inpaint", broken)
    out = tmp_path / "o.wav"
    assert cli.main(["inpaint", str(path), "-o", str(out), "--gap", "100:5"]) == cli.EXIT_NUMERICAL
    assert not out.exists()


def test_inpaint_linalg_failure(tmp_path, wav, monkeypatch):
    path, _ = wav

    def broken(*args):
        raise np.linalg.LinAlgError("singular")

    monkeypatch.setattr(cli, "inpaint", broken)
    assert cli.main(["inpaint", str(path), "-o", str(tmp_path / "o.wav"),
                     "--gap", "100:5"]) == cli.EXIT_NUMERICAL


def test_bench_and_summarize(tmp_path, capsys):
    spec = {"inputs": ["synthetic:sine"], "methods": [{"model": "ana", "weights": "energy"}],
            "gaps_per_signal": 2, "gap_lengths_ms": [5], "synthetic_duration": 0.6,
            "synthetic_rate": 8000, "frame": {"window_length": 256, "hop": 64, "channels": 256},
            "solver": {"max_iterations": 20}}
    (tmp_path / "spec.json").write_text(json.dumps(spec))
    out = tmp_path / "r.csv"
    assert cli.main(["bench", str(tmp_path / "spec.json"), "-o", str(out)]) == cli.EXIT_OK
    assert len(harness.read_results(out)) == 2
    capsys.readouterr()
    assert cli.main(["summarize", str(out)]) == cli.EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(harness.SUMMARY_COLUMNS)
    assert lines[1].startswith("5,ana-energy,half,") and lines[1].endswith(",2")


def test_bench_errors(tmp_path):
    assert cli.main(["bench", str(tmp_path / "missing.json")]) == cli.EXIT_IO
    (tmp_path / "s.json").write_text(json.dumps({"inputs": ["synthetic:sine"]}))
    assert cli.main(["bench", str(tmp_path / "s.json")]) == cli.EXIT_USAGE  # no output path
    (tmp_path / "bad.json").write_text(json.dumps({"inputs": ["x"], "oops": 1}))
    assert cli.main(["bench", str(tmp_path / "bad.json"), "-o", "r.csv"]) == cli.EXIT_USAGE


def test_summarize_errors(tmp_path):
    assert cli.main(["summarize", str(tmp_path / "missing.csv")]) == cli.EXIT_IO
    (tmp_path / "bad.csv").write_text("a,b\n1,2\n")
    assert cli.main(["summarize", str(tmp_path / "bad.csv")]) == cli.EXIT_IO


def test_no_subcommand_is_usage_error():
    assert cli.main([]) == cli.EXIT_USAGE
