import subprocess
import sys

import numpy as np
import pytest

from spikelens.cli import main
from spikelens.codec import SpikeTrain, decode
from spikelens.dataset_io import GrayImage, read_pgm, write_pgm
from spikelens.edges import canny
from spikelens.metrics import evaluate
from spikelens.signals import extract_coordinates, signals_from_csv

from conftest import MNIST_IMAGES, MNIST_LABELS

DATA = ["--mnist", MNIST_IMAGES, "--labels", MNIST_LABELS]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestEdges:
    def test_writes_one_pgm(self, tmp_path, capsys, mnist):
        code, _, _ = run(["edges", *DATA, "--index", "7", "--low", "100", "--high", "200",
                          "-o", str(tmp_path)], capsys)
        assert code == 0
        files = list(tmp_path.iterdir())
        assert [f.name for f in files] == ["mnist_7_edges.pgm"]
        img = read_pgm(files[0].read_bytes())
        assert img == canny(mnist.images[7]).to_gray()

    def test_missing_file(self, tmp_path, capsys):
        code, out, err = run(["edges", "--mnist", str(tmp_path / "nope.idx"), "-o", str(tmp_path)],
                             capsys)
        assert code == 2
        assert "nope.idx" in err and out == ""

    def test_uniform_warns_but_writes(self, tmp_path, capsys, caplog):
        src = tmp_path / "flat.pgm"
        src.write_bytes(write_pgm(GrayImage(np.full((8, 8), 90, dtype=np.uint8))))
        code, _, _ = run(["edges", "--image", str(src), "-o", str(tmp_path / "out")], capsys)
        assert code == 0
        assert "empty edge image" in caplog.text
        assert (tmp_path / "out" / "flat_edges.pgm").exists()

    def test_low_above_high(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["edges", *DATA, "--low", "50", "--high", "10", "-o", str(tmp_path)])
        assert exc.value.code == 2


def test_signals_to_stdout(capsys, mnist):
    code, out, _ = run(["signals", *DATA, "--index", "2"], capsys)
    assert code == 0
    sig = signals_from_csv(out, 28, 28)
    assert sig == extract_coordinates(canny(mnist.images[2]))


def test_signals_raw(capsys, mnist):
    code, out, _ = run(["signals", *DATA, "--index", "2", "--raw"], capsys)
    assert len(out.splitlines()) - 1 == np.count_nonzero(mnist.images[2].pixels)


class TestEncodeDecodeMetrics:
    def test_encode_outputs(self, tmp_path, capsys):
        code, _, _ = run(["encode", *DATA, "--index", "3", "--method", "sf", "--adaptive",
                          "--sampling-threshold", "0.1", "--encoding-threshold", "0.2",
                          "-o", str(tmp_path)], capsys)
        assert code == 0
        assert sorted(f.name for f in tmp_path.iterdir()) == [
            "signals.csv", "x.spikes.json", "y.spikes.json"
        ]
        tx = SpikeTrain.from_json((tmp_path / "x.spikes.json").read_text())
        assert tx.config.adaptive and tx.config.encoding_threshold == 0.2

    def test_zero_threshold_rejected(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["encode", *DATA, "--method", "sf", "--encoding-threshold", "0",
                  "-o", str(tmp_path)])
        assert exc.value.code == 2
        assert "encoding-threshold" in capsys.readouterr().err

    def test_bad_method_rejected(self, tmp_path):
        with pytest.raises(SystemExit):
            main(["encode", *DATA, "--method", "bsa", "-o", str(tmp_path)])

    @pytest.mark.parametrize("method,adaptive", [("sf", True), ("tbr", True), ("sf", False)])
    def test_end_to_end_matches_library(self, tmp_path, capsys, mnist, method, adaptive):
        flags = ["--adaptive", "--sampling-threshold", "1.0"] if adaptive else []
        run(["encode", *DATA, "--index", "11", "--method", method, *flags,
             "--encoding-threshold", "0.9", "-o", str(tmp_path)], capsys)
        code, out, _ = run(["decode", "--x-spikes", str(tmp_path / "x.spikes.json"),
                            "--y-spikes", str(tmp_path / "y.spikes.json"),
                            "--image", str(tmp_path / "recon.pgm")], capsys)
        assert code == 0 and out.startswith("index,x,y\n")
        assert set(np.unique(read_pgm((tmp_path / "recon.pgm").read_bytes()).pixels)) <= {0, 255}

        sig = extract_coordinates(canny(mnist.images[11]))
        for axis in ("x", "y"):
            code, out, _ = run(["metrics", "--signals", str(tmp_path / "signals.csv"),
                                "--spikes", str(tmp_path / f"{axis}.spikes.json"),
                                "--axis", axis], capsys)
            assert code == 0
            header, row = out.splitlines()
            assert header == "rmse,snr_db,afr,spike_count,fitness"
            t = SpikeTrain.from_json((tmp_path / f"{axis}.spikes.json").read_text())
            s = getattr(sig, axis)
            assert row == evaluate(s, decode(t), t).csv_row()

    def test_encode_from_signal_csv(self, tmp_path, capsys):
        csv_path = tmp_path / "s.csv"
        csv_path.write_text("index,x,y\n0,1,1\n1,4,1\n2,2,3\n")
        code, _, _ = run(["encode", "--signals", str(csv_path), "--method", "tbr",
                          "--encoding-threshold", "1", "-o", str(tmp_path / "o")], capsys)
        assert code == 0
        t = SpikeTrain.from_json((tmp_path / "o" / "x.spikes.json").read_text())
        assert t.spikes.tolist() == [1, -1, -1]


SWEEP = ["--sampling-axis", "0.1,0.5", "--encoding-axis", "0.2,0.4,0.8", "--samples", "10"]


class TestSweep:
    def test_outputs_and_determinism(self, tmp_path, capsys):
        a, b = tmp_path / "a", tmp_path / "b"
        code, out, _ = run(["sweep", *DATA, "--method", "sf", "--adaptive", *SWEEP,
                            "--seed", "1", "-o", str(a)], capsys)
        assert code == 0
        assert "x: best sampling_threshold=" in out and "combined:" in out
        run(["sweep", *DATA, "--method", "sf", "--adaptive", *SWEEP, "--seed", "1",
             "-o", str(b)], capsys)
        for name in ("grid_x.csv", "grid_y.csv", "grid_combined.csv"):
            text = (a / name).read_text()
            assert len(text.splitlines()) == 1 + 2 * 3
            assert (b / name).read_bytes() == (a / name).read_bytes()

    def test_non_adaptive(self, tmp_path, capsys):
        code, out, _ = run(["sweep", *DATA, "--method", "tbr", *SWEEP, "-o", str(tmp_path)],
                           capsys)
        assert code == 0
        assert len((tmp_path / "grid_x.csv").read_text().splitlines()) == 1 + 3
        assert "sampling_threshold=-" in out

    def test_zero_samples(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", *DATA, "--method", "sf", "--samples", "0", "-o", str(tmp_path)])
        assert exc.value.code == 2


class TestDemo:
    def test_ten_digit_reports(self, tmp_path, capsys):
        code, _, _ = run(["demo", *DATA, "-o", str(tmp_path)], capsys)
        assert code == 0
        dirs = sorted(p.name for p in tmp_path.iterdir())
        assert dirs == [f"digit_{d}" for d in range(10)]
        for d in dirs:
            files = {p.name for p in (tmp_path / d).iterdir()}
            assert {"original.pgm", "edges.pgm", "signals.csv", "x.spikes.json", "y.spikes.json",
                    "reconstructed.csv", "reconstructed.pgm", "metrics_x.csv",
                    "metrics_y.csv"} <= files
            recon = read_pgm((tmp_path / d / "reconstructed.pgm").read_bytes())
            assert set(np.unique(recon.pixels)) <= {0, 255}
            header = (tmp_path / d / "reconstructed.csv").read_text().splitlines()[0]
            assert header == "index,x,y,x_reconstructed,y_reconstructed"

    def test_unlabelled(self, tmp_path, capsys):
        code, _, err = run(["demo", "--mnist", MNIST_IMAGES, "-o", str(tmp_path)], capsys)
        assert code != 0
        assert "MissingLabels" in err


def test_reduce_stat(capsys):
    code, out, _ = run(["reduce-stat", *DATA, "--samples", "50"], capsys)
    assert code == 0
    assert 0 < float(out) < 1


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "spikelens", "edges", "--mnist", str(tmp_path / "missing"),
         "-o", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2
    assert proc.stdout == ""
    assert "missing" in proc.stderr
