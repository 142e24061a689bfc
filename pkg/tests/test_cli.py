"""Command-line interface, exercised in process through main()."""

import numpy as np
import pytest

from pmulab.cli import main


def _synth(tmp_path, name="wave.csv", *extra):
    out = tmp_path / name
    argv = ["synth", "--kind", "magnitude", "--index", "0.01", "--fm", "20", "--out", str(out)]
    argv.extend(extra)
    assert main(argv) == 0
    return out


def test_synth_row_count(tmp_path):
    out = _synth(tmp_path)
    lines = out.read_text().splitlines()
    assert len(lines) == 3841  # header + 4 s at 960 Hz


def test_synth_zero_index_equals_kind_none(tmp_path):
    a = tmp_path / "none.csv"
    b = tmp_path / "zero.csv"
    assert main(["synth", "--kind", "none", "--out", str(a)]) == 0
    assert main(["synth", "--kind", "magnitude", "--index", "0", "--fm", "20", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_synth_accepts_alpha_alias(tmp_path):
    a = _synth(tmp_path, "via_index.csv")
    b = tmp_path / "via_alpha.csv"
    assert main(["synth", "--kind", "magnitude", "--alpha", "0.01", "--fm", "20", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_synth_is_deterministic(tmp_path):
    a = _synth(tmp_path, "a.csv")
    b = _synth(tmp_path, "b.csv")
    assert a.read_bytes() == b.read_bytes()


def test_synth_rejects_nyquist_violation(tmp_path, capsys):
    rc = main(["synth", "--fs", "100", "--f0", "60", "--out", str(tmp_path / "x.csv")])
    assert rc != 0
    assert "Nyquist" in capsys.readouterr().err


def test_synth_rejects_non_integer_cycle(tmp_path, capsys):
    rc = main(["synth", "--fs", "950", "--f0", "60", "--out", str(tmp_path / "x.csv")])
    assert rc != 0
    assert "samples per cycle" in capsys.readouterr().err


def test_estimate_pure_carrier(tmp_path):
    wave = tmp_path / "carrier.csv"
    assert main(["synth", "--kind", "none", "--out", str(wave)]) == 0
    out = tmp_path / "phasors.csv"
    assert main(["estimate", "--in", str(wave), "--h", "2", "--fps", "60", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()[1:]
    mags = np.array([float(r.split(",")[2]) for r in rows])
    angs = np.array([float(r.split(",")[3]) for r in rows])
    assert np.max(np.abs(mags - 1.0)) < 1e-12
    assert np.max(np.abs(angs)) < 1e-12


def test_estimate_is_deterministic(tmp_path):
    wave = _synth(tmp_path)
    a = tmp_path / "pa.csv"
    b = tmp_path / "pb.csv"
    for out in (a, b):
        assert main(["estimate", "--in", str(wave), "--h", "8", "--fps", "240", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_estimate_short_input_fails(tmp_path, capsys):
    wave = tmp_path / "short.csv"
    assert main(["synth", "--kind", "none", "--duration", "0.05", "--out", str(wave)]) == 0
    rc = main(["estimate", "--in", str(wave), "--h", "8", "--fps", "60", "--out", str(tmp_path / "p.csv")])
    assert rc != 0
    assert "shorter than one window" in capsys.readouterr().err


def test_response_table(tmp_path):
    out = tmp_path / "resp.csv"
    assert main(["response", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1201  # header + 300 frequencies x 4 windows
    nulls = [l for l in lines[1:] if l.endswith(",null")]
    null_keys = {(round(float(l.split(",")[0]), 3), int(l.split(",")[1])) for l in nulls}
    assert (15.0, 4) in null_keys and (15.0, 8) in null_keys
    sq2 = np.sqrt(2.0)
    for line in lines[1:]:
        cells = line.split(",")
        if abs(float(cells[0]) - 0.1) < 1e-9:
            assert abs(float(cells[3]) / sq2 - 1.0) < 1e-3


def test_analyze_pipeline(tmp_path):
    wave = _synth(tmp_path)
    phasors = tmp_path / "phasors.csv"
    assert main(["estimate", "--in", str(wave), "--h", "4", "--fps", "240", "--out", str(phasors)]) == 0
    report = tmp_path / "report.csv"
    assert main(["analyze", "--in", str(phasors), "--channel", "magnitude", "--fm", "20", "--out", str(report)]) == 0
    lines = report.read_text().splitlines()
    cells = lines[1].split(",")
    assert cells[0] == "magnitude"
    assert cells[-1] == "true"
    a_rec = float(cells[4])
    assert a_rec == pytest.approx(0.01, rel=2e-3)


def test_analyze_estimates_frequency_when_missing(tmp_path):
    wave = _synth(tmp_path)
    phasors = tmp_path / "phasors.csv"
    assert main(["estimate", "--in", str(wave), "--h", "2", "--fps", "240", "--out", str(phasors)]) == 0
    report = tmp_path / "report.csv"
    assert main(["analyze", "--in", str(phasors), "--channel", "magnitude", "--out", str(report)]) == 0
    fm = float(report.read_text().splitlines()[1].split(",")[1])
    assert fm == pytest.approx(20.0, abs=0.1)


def test_recover_prints_inversion(capsys):
    rc = main([
        "recover", "--a-meas", "0.001034", "--phi-meas", "116.26",
        "--fm", "20", "--h", "8",
    ])
    assert rc == 0
    out = capsys.readouterr().out
    values = dict(line.split("=") for line in out.splitlines())
    assert float(values["a_rec"]) == pytest.approx(0.009995, abs=5e-6)
    assert float(values["theta_deg"]) == pytest.approx(116.25, abs=1e-6)


def test_recover_comb_null_fails(capsys):
    rc = main(["recover", "--a-meas", "1e-8", "--phi-meas", "0", "--fm", "15", "--h", "4"])
    assert rc != 0
    assert "unrecoverable" in capsys.readouterr().err


def test_reproduce_table1(tmp_path, capsys):
    out = tmp_path / "table1.csv"
    rc = main(["reproduce", "table1", "--out", str(out)])
    printed = capsys.readouterr().out
    assert rc == 0, printed
    assert "overall: pass" in printed
    lines = out.read_text().splitlines()
    assert len(lines) == 11  # header + 2 kinds x 5 columns
    assert all(line.endswith(",true,true,true,true") for line in lines[1:])


def test_estimate_with_antialias_and_center(tmp_path):
    wave = _synth(tmp_path)
    out = tmp_path / "filtered.csv"
    assert main([
        "estimate", "--in", str(wave), "--h", "8", "--fps", "60",
        "--antialias", "--timestamp", "center", "--out", str(out),
    ]) == 0
    meta = dict(
        line.split("=", 1) for line in (tmp_path / "filtered.meta").read_text().splitlines()
    )
    assert meta["antialias"] == "on"
    assert meta["timestamp_convention"] == "center"
