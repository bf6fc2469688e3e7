import json

import numpy as np
import pytest

from conftest import fgn_ensemble, three_phase_surrogate
from lrdkit import (
    AnalyzeConfig,
    DataQualityError,
    ParameterError,
    ParseError,
    RawRecording,
    UniformSeries,
    analyze,
    clean_and_resample,
    emit,
    ingest,
    read_csv,
)
from lrdkit.cli import PhaseResult, main, to_json


# ---------------------------------------------------------------------------
# ingest
# ---------------------------------------------------------------------------

def test_ingest_rr_ms(tmp_path):
    path = tmp_path / "athlete7.txt"
    path.write_text("800\n810\n790\n")
    rec = ingest(path, fmt="rr-ms")
    assert isinstance(rec, RawRecording)
    assert np.array_equal(rec.rr_ms, [800.0, 810.0, 790.0])
    assert rec.subject_id == "athlete7"
    assert rec.rejected_lines == ()


def test_ingest_rr_ms_rejects_nonpositive(tmp_path):
    path = tmp_path / "r.txt"
    path.write_text("800\n-5\n810\n0\n790\n")
    rec = ingest(path, fmt="rr-ms")
    assert rec.rejected_lines == (2, 4)
    assert rec.rr_ms.size == 3


def test_ingest_rr_ms_nonnumeric_row(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("800\nabc\n810\n")
    with pytest.raises(ParseError) as err:
        ingest(path, fmt="rr-ms")
    assert err.value.line == 2


def test_ingest_uniform_csv(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("t,value\n0,1.5\n0.5,2.5\n1.0,3.5\n")
    series = ingest(path, fmt="uniform-csv")
    assert isinstance(series, UniformSeries)
    assert series.delta == pytest.approx(0.5)


def test_ingest_unknown_format(tmp_path):
    with pytest.raises(ParameterError):
        ingest(tmp_path / "x", fmt="parquet")


# ---------------------------------------------------------------------------
# cleaning and resampling
# ---------------------------------------------------------------------------

def test_clean_constant_rr():
    rec = RawRecording(rr_ms=np.full(200, 600.0))
    result = clean_and_resample(rec, rate_hz=1.0)
    assert result.n_dropped == 0
    assert np.allclose(result.series.values, 100.0)  # 60000 / 600


def test_clean_drops_artifact():
    rr = np.full(100, 800.0)
    rr[50] = 50.0  # below the 300 ms floor
    result = clean_and_resample(RawRecording(rr_ms=rr))
    assert result.n_dropped == 1
    assert result.n_intervals == 100


def test_clean_quality_gates():
    with pytest.raises(DataQualityError):
        clean_and_resample(RawRecording(rr_ms=np.full(5, 700.0)))
    rr = np.concatenate([np.full(60, 700.0), np.full(61, 100.0)])
    with pytest.raises(DataQualityError):
        clean_and_resample(RawRecording(rr_ms=rr))


def test_clean_recovers_smooth_bpm_curve():
    # build RR intervals from a known smooth BPM curve and invert
    t = 0.0
    times, bpms = [], []
    while t < 600.0:
        bpm = 120.0 + 20.0 * np.sin(2 * np.pi * t / 300.0)
        rr = 60000.0 / bpm
        t += rr / 1000.0
        times.append(t)
        bpms.append(bpm)
    rec = RawRecording(rr_ms=np.diff([0.0] + list(np.array(times) * 1000.0)))
    result = clean_and_resample(rec, rate_hz=1.0)
    grid = result.series.times
    truth = 120.0 + 20.0 * np.sin(2 * np.pi * grid / 300.0)
    inner = slice(5, -5)
    assert np.max(np.abs(result.series.values[inner] - truth[inner])) < 1.0


# ---------------------------------------------------------------------------
# analyze pipeline
# ---------------------------------------------------------------------------

def test_analyze_short_series_warns_but_reports():
    rng = np.random.default_rng(0)
    series = UniformSeries(rng.standard_normal(600))
    report = analyze(series, config=AnalyzeConfig(min_seg=10))
    assert any("unreliable" in w for w in report.warnings)
    assert report.whole is not None


def test_analyze_fgn_no_changes():
    # an unbroken LRD path should usually come out as a single phase
    ks, wav = [], []
    for series in fgn_ensemble(0.8, 8192, 9, seed0=40):
        report = analyze(series, config=AnalyzeConfig(band=(0.05, 1.5), detect_max_n=3000))
        ks.append(report.segmentation.k)
        if report.whole.wavelet is not None:
            wav.append(report.whole.wavelet.h_hat)
    assert sum(k == 1 for k in ks) > len(ks) / 2
    assert np.mean(wav) == pytest.approx(0.8, abs=0.1)


def test_analyze_surrogate_phases_and_report(tmp_path):
    series = three_phase_surrogate(3)
    config = AnalyzeConfig(detect_max_n=2500)
    report = analyze(series, config=config, subject="surrogate3")
    names = [p.name for p in report.phases]
    assert names[0] == "beginning" and names[-1] == "end"
    assert report.segmentation.k == len(report.segmentation.bounds())
    payload = report.to_dict()
    assert payload["schema_version"] == 1
    assert payload["config"]["band"] == [0.2, 4.0]
    assert payload["comparison"] is not None

    paths = emit(report, tmp_path / "out")
    names = {p.name for p in paths}
    assert {"report.json", "segments.json", "summary.txt"} <= names
    assert any(n.startswith("spectrum_") for n in names)
    assert any(n.startswith("dfa_") for n in names)
    parsed = json.loads((tmp_path / "out" / "report.json").read_text())
    assert parsed["subject"] == "surrogate3"


def test_analyze_deterministic_bytes(tmp_path):
    series = three_phase_surrogate(4, n_phase=2048)
    config = AnalyzeConfig(detect_max_n=2000)
    emit(analyze(series, config=config, subject="x"), tmp_path / "a")
    emit(analyze(series, config=config, subject="x"), tmp_path / "b")
    assert (tmp_path / "a/report.json").read_bytes() == (tmp_path / "b/report.json").read_bytes()
    assert (tmp_path / "a/summary.txt").read_bytes() == (tmp_path / "b/summary.txt").read_bytes()


def test_emit_failed_phase_handled(tmp_path):
    rng = np.random.default_rng(1)
    series = UniformSeries(rng.standard_normal(4096))
    report = analyze(series, config=AnalyzeConfig())
    report.phases = [PhaseResult(name="beginning", lo=0, hi=10,
                                 dfa_error="too short", wavelet_error="too short")]
    paths = emit(report, tmp_path / "out")
    names = {p.name for p in paths}
    assert "spectrum_beginning.csv" not in names
    summary = (tmp_path / "out" / "summary.txt").read_text()
    assert "failed" in summary


def test_config_round_trip_and_validation():
    cfg = AnalyzeConfig(band=(0.1, 2.0), k_max=5)
    back = AnalyzeConfig.from_dict(cfg.to_dict())
    assert back == cfg
    with pytest.raises(ParameterError):
        AnalyzeConfig.from_dict({"nonsense": 1})
    with pytest.raises(ParameterError):
        AnalyzeConfig.from_dict({"band": [1.0]})


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------

def test_cli_synth_segment_estimate_flow(tmp_path, capsys):
    csv_path = tmp_path / "fgn.csv"
    assert main(["synth", "fgn", "--hurst", "0.7", "--n", "4096",
                 "--seed", "3", "--out", str(csv_path)]) == 0
    assert csv_path.exists()
    series = read_csv(csv_path)
    assert len(series) == 4096
    capsys.readouterr()

    assert main(["dfa", str(csv_path), "--out", str(tmp_path / "dfa.csv")]) == 0
    est = json.loads(capsys.readouterr().out)
    assert 0.4 < est["h"] < 1.0

    assert main(["wavelet", str(csv_path), "--mode", "lrd",
                 "--out", str(tmp_path / "spec.csv")]) == 0
    est = json.loads(capsys.readouterr().out)
    assert 0.4 < est["h"] < 1.0

    assert main(["gof", str(csv_path), "--mode", "lrd"]) == 0
    est = json.loads(capsys.readouterr().out)
    assert "gof" in est and 0 <= est["gof"]["p_value"] <= 1

    assert main(["segment", str(csv_path), "--k", "2"]) == 0
    seg = json.loads(capsys.readouterr().out)
    assert seg["K"] == 2


def test_cli_analyze_rr(tmp_path, capsys):
    rr_path = tmp_path / "ath.txt"
    rng = np.random.default_rng(2)
    rr = rng.normal(700, 30, 1500).clip(400, 1500)
    rr_path.write_text("\n".join(f"{v:.1f}" for v in rr) + "\n")
    out_dir = tmp_path / "out"
    code = main(["analyze", str(rr_path), "--format", "rr-ms",
                 "--out", str(out_dir), "--min-seg", "10"])
    assert code == 0
    report = json.loads((out_dir / "report.json").read_text())
    assert report["cleaning"]["n_intervals"] == 1500
    assert (out_dir / "resampled.csv").exists()
    resampled = read_csv(out_dir / "resampled.csv")
    assert resampled.delta == pytest.approx(1.0)


def test_cli_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"k_max": 4, "band": [0.1, 2.0], "min_seg": 10}))
    csv_path = tmp_path / "s.csv"
    main(["synth", "fgn", "--hurst", "0.6", "--n", "2048", "--seed", "1",
          "--out", str(csv_path)])
    capsys.readouterr()
    assert main(["analyze", str(csv_path), "--config", str(cfg)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["config"]["k_max"] == 4
    assert report["config"]["band"] == [0.1, 2.0]

    toml_cfg = tmp_path / "cfg.toml"
    toml_cfg.write_text('k_max = 5\nband = [0.05, 1.5]\nmin_seg = 10\n')
    assert main(["analyze", str(csv_path), "--config", str(toml_cfg)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["config"]["k_max"] == 5
    # flags override the config file
    assert main(["analyze", str(csv_path), "--config", str(toml_cfg),
                 "--k-max", "3"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["config"]["k_max"] == 3


def test_cli_exit_codes(tmp_path, capsys):
    # usage error from argparse
    with pytest.raises(SystemExit) as exc:
        main(["synth", "fgn", "--n", "100", "--out", "x.csv"])  # missing --hurst
    assert exc.value.code == 1
    # parameter domain error
    assert main(["synth", "fgn", "--hurst", "1.5", "--n", "100",
                 "--out", str(tmp_path / "x.csv")]) == 1
    # missing file -> data error
    assert main(["dfa", str(tmp_path / "missing.csv")]) == 2
    # malformed file -> parse error
    bad = tmp_path / "bad.csv"
    bad.write_text("t,value\n0,a\n")
    assert main(["dfa", str(bad)]) == 2
    capsys.readouterr()


def test_to_json_rounds_and_sorts():
    text = to_json({"b": 1 / 3, "a": float("inf")})
    assert text.index('"a"') < text.index('"b"')
    assert "0.333333333" in text
    assert "inf" in text
