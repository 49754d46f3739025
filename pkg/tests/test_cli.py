import json

import pytest

from dglseg.cli import main
from dglseg.dataset import load_label_map


@pytest.fixture(scope="module")
def synth_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli_ds")
    rc = main([
        "synth", "--out", str(out), "--count", "2", "--style", "iid",
        "--regions", "2", "--width", "72", "--height", "54",
        "--tv", "0.9", "--seed", "1",
    ])
    assert rc == 0
    return out


class TestSynth:
    def test_writes_dataset(self, synth_dir):
        manifest = json.loads((synth_dir / "manifest.json").read_text())
        assert len(manifest["entries"]) == 2
        ann = load_label_map(synth_dir / manifest["entries"][0]["annotations"][0])
        assert ann.n_regions == 2


class TestSegment:
    def test_writes_labels_and_stats(self, synth_dir, tmp_path, capsys):
        out = tmp_path / "seg"
        rc = main([
            "segment",
            "--image", str(synth_dir / "iid_000.png"),
            "--labels", str(synth_dir / "iid_000_gt.png"),
            "--regime", "gt:100",
            "--colorspace", "RGB", "--channels", "0,1,2", "--bins", "4,4,4",
            "--superpixels", "60", "--compactness", "100",
            "--out", str(out),
        ])
        assert rc == 0
        stats = json.loads((out / "stats.json").read_text())
        assert stats["accuracy"] > 0.9
        reloaded = load_label_map(out / "labels.png")
        assert reloaded.n_regions == 2
        assert "accuracy" in capsys.readouterr().out

    def test_bad_regime_string(self):
        with pytest.raises(SystemExit):
            main(["segment", "--image", "x", "--labels", "y", "--regime", "zz:1"])

    def test_missing_image_is_an_error(self, synth_dir, capsys):
        rc = main([
            "segment", "--image", str(synth_dir / "nope.png"),
            "--labels", str(synth_dir / "iid_000_gt.png"),
        ])
        assert rc == 2
        assert "error" in capsys.readouterr().err


class TestBench:
    def test_grid_run(self, synth_dir, tmp_path, capsys):
        out = tmp_path / "rep"
        rc = main([
            "bench", "--manifest", str(synth_dir / "manifest.json"),
            "--regime", "gt:100", "--regime", "bbp:10:50",
            "--out", str(out),
        ])
        assert rc == 0
        lines = (out / "runs.csv").read_text().splitlines()
        assert len(lines) == 1 + 2 * 2  # header + images x regimes
        assert "gt_fraction" in capsys.readouterr().out


class TestBounds:
    def test_prints_values(self, capsys):
        rc = main([
            "bounds", "--regions", "2", "--alphabet", "2", "--n", "100",
            "--ntrain", "100", "--vmin", "1.0", "--delta", "0.25",
        ])
        assert rc == 0
        out = capsys.readouterr().out
        assert "0.0618" in out
        assert "min superpixel n  : 25" in out
        assert "0.25" in out

    def test_zero_separation_reported(self, capsys):
        rc = main([
            "bounds", "--regions", "2", "--alphabet", "4", "--n", "10",
            "--ntrain", "10", "--vmin", "0",
        ])
        assert rc == 0
        assert "undefined" in capsys.readouterr().out
