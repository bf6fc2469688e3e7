"""Batch front end: ingest, clean, segment, estimate, test, report.

Subcommands
-----------
synth      generate FGN / lfGN sample paths to CSV
segment    change-point detection (fixed K or penalized scan)
dfa        detrended fluctuation analysis of one series
wavelet    wavelet scale spectrum and H estimate
gof        wavelet estimate plus chi-squared goodness of fit
analyze    full pipeline: segment, per-phase DFA + wavelet + GOF, comparison
benchmark  Monte Carlo benchmark of both estimators on synthetic FGN

Exit codes: 0 success, 1 usage or invalid parameters, 2 data quality,
3 numerical failure.  All reports are byte-deterministic for a fixed seed:
floats are rounded to 9 significant digits before serialization and JSON
keys are sorted.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .changepoint import PenaltyScan, Segmentation, detect_k, select_k
from .dfa import default_windows, dfa_profile, estimate_h_dfa, profile_csv
from .errors import (
    DataQualityError,
    DegenerateDataError,
    LrdError,
    NumericalError,
    ParameterError,
    ParseError,
)
from .inference import FractalEstimate, anova_f, benchmark_estimators
from .series import (
    PiecewiseConstantTrend,
    PolynomialTrend,
    UniformSeries,
    add_trend,
    aggregate,
    read_csv,
    write_csv,
)
from .synthesis import FgnParams, SpectralProfile, generate_fgn, generate_lfgn
from .wavelet import (
    ScaleSpectrum,
    default_scales,
    estimate_h_wavelet,
    goodness_of_fit,
    scale_spectrum,
)

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# ingestion and preprocessing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RawRecording:
    """Inter-beat intervals in milliseconds, as recorded."""

    rr_ms: np.ndarray
    subject_id: str = ""
    rejected_lines: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "rr_ms", np.asarray(self.rr_ms, dtype=np.float64))


@dataclass(frozen=True)
class CleanResult:
    series: UniformSeries
    n_intervals: int
    n_dropped: int


def ingest(path, fmt: str = "uniform-csv"):
    """Parse an input file into a :class:`RawRecording` or :class:`UniformSeries`.

    ``rr-ms`` files carry one inter-beat interval (milliseconds) per line;
    non-positive intervals are rejected with their line numbers recorded on
    the recording.  ``uniform-csv`` files carry ``t,value`` rows.
    """
    path = Path(path)
    if fmt == "uniform-csv":
        return read_csv(path)
    if fmt != "rr-ms":
        raise ParameterError(f"unknown input format {fmt!r}")
    intervals = []
    rejected = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                value = float(line)
            except ValueError:
                raise ParseError(f"non-numeric interval {line!r}", line=lineno) from None
            if value <= 0:
                rejected.append(lineno)
                continue
            intervals.append(value)
    if not intervals:
        raise ParseError(f"no usable intervals in {path}")
    return RawRecording(rr_ms=np.array(intervals), subject_id=path.stem,
                        rejected_lines=tuple(rejected))


# Physiological plausibility window for inter-beat intervals.
RR_MIN_MS = 300.0
RR_MAX_MS = 2000.0


def clean_and_resample(rec: RawRecording, rate_hz: float = 1.0) -> CleanResult:
    """Artifact-filter a recording and resample it to a uniform BPM series.

    Intervals outside [300, 2000] ms are dropped; the rest are converted to
    instantaneous BPM, placed at their cumulative beat times, and linearly
    interpolated onto a uniform grid.  More than 50% dropped is treated as
    an unusable recording.
    """
    if rate_hz <= 0:
        raise ParameterError(f"resampling rate must be positive, got {rate_hz}")
    rr = rec.rr_ms
    keep = (rr >= RR_MIN_MS) & (rr <= RR_MAX_MS)
    dropped = int((~keep).sum())
    valid = rr[keep]
    if valid.size < 10:
        raise DataQualityError(f"only {valid.size} valid intervals after filtering")
    if dropped > 0.5 * rr.size:
        raise DataQualityError(f"{dropped} of {rr.size} intervals dropped; recording unusable")
    beat_times = np.cumsum(valid) / 1000.0
    bpm = 60000.0 / valid
    delta = 1.0 / rate_hz
    n_out = int(np.floor((beat_times[-1] - beat_times[0]) / delta)) + 1
    grid = beat_times[0] + delta * np.arange(n_out)
    values = np.interp(grid, beat_times, bpm)
    return CleanResult(
        series=UniformSeries(values, delta=delta, t0=float(grid[0])),
        n_intervals=int(rr.size),
        n_dropped=dropped,
    )


# ---------------------------------------------------------------------------
# pipeline configuration and report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AnalyzeConfig:
    """Every tunable of the analysis pipeline, overridable via flags or file."""

    k_max: int = 8
    min_seg: int = 20
    elbow_ratio: float = 5.0
    detect_max_n: int = 4000
    band: tuple = (0.2, 4.0)
    n_scales: int = 12
    n_windows: int = 6
    gof_level: float = 0.05
    rate_hz: float = 1.0
    regression: str = "gls"
    min_samples: int = 1000

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["band"] = list(self.band)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "AnalyzeConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
        if "band" in data:
            band = data["band"]
            if len(band) != 2:
                raise ParameterError("band must be a pair [omega0, omega1]")
            data = dict(data, band=(float(band[0]), float(band[1])))
        return cls(**data)


@dataclass
class PhaseResult:
    name: str
    lo: int
    hi: int
    dfa: FractalEstimate | None = None
    dfa_error: str | None = None
    wavelet: FractalEstimate | None = None
    wavelet_error: str | None = None
    spectrum: ScaleSpectrum | None = None
    dfa_curve: str | None = None  # CSV payload for the w,F plot data

    def to_dict(self) -> dict:
        def est_dict(est, error):
            if error is not None:
                return {"error": error}
            if est is None:
                return {"error": "not computed"}
            out = {
                "h": est.h_hat, "slope": est.slope, "intercept": est.intercept,
                "stderr": est.stderr, "ci_halfwidth": est.ci_halfwidth,
                "method": est.method,
            }
            if est.gof is not None:
                out["gof"] = {
                    "statistic": est.gof.statistic, "dof": est.gof.dof,
                    "p_value": est.gof.p_value, "level": est.gof.level,
                    "accepted": est.gof.accepted,
                }
            return out

        return {
            "name": self.name, "lo": self.lo, "hi": self.hi, "n": self.hi - self.lo,
            "dfa": est_dict(self.dfa, self.dfa_error),
            "wavelet": est_dict(self.wavelet, self.wavelet_error),
        }


@dataclass
class AnalysisReport:
    subject: str
    series: UniformSeries
    config: AnalyzeConfig
    scan: PenaltyScan
    segmentation: Segmentation
    phases: list
    whole: PhaseResult
    comparison: object | None = None
    warnings: list = field(default_factory=list)
    cleaning: CleanResult | None = None

    def to_dict(self) -> dict:
        comparison = None
        if self.comparison is not None:
            comparison = {
                "labels": list(self.comparison.labels),
                "f_stat": self.comparison.f_stat,
                "p_value": self.comparison.p_value,
            }
        return {
            "schema_version": SCHEMA_VERSION,
            "subject": self.subject,
            "n_samples": len(self.series),
            "delta": self.series.delta,
            "t0": self.series.t0,
            "config": self.config.to_dict(),
            "warnings": list(self.warnings),
            "cleaning": None if self.cleaning is None else {
                "n_intervals": self.cleaning.n_intervals,
                "n_dropped": self.cleaning.n_dropped,
            },
            "band": list(self.config.band),
            "scan": self.scan.to_dict(),
            "segmentation": self.segmentation.to_dict(),
            "phases": [p.to_dict() for p in self.phases],
            "whole": self.whole.to_dict(),
            "comparison": comparison,
        }


def _phase_names(k: int) -> list:
    """Map a K-way segmentation onto race phases.

    Three segments map directly onto beginning / middle / end; with more
    than three, all interior segments merge into the middle phase (the raw
    segmentation is still reported in full).
    """
    if k == 1:
        return [("whole", 0, 0)]
    if k == 2:
        return [("beginning", 0, 0), ("end", 1, 1)]
    return [("beginning", 0, 0), ("middle", 1, k - 2), ("end", k - 1, k - 1)]


def _estimate_phase(series: UniformSeries, lo: int, hi: int, name: str,
                    config: AnalyzeConfig) -> PhaseResult:
    phase = PhaseResult(name=name, lo=lo, hi=hi)
    sub = series.slice(lo, hi)
    try:
        windows = default_windows(len(sub), count=config.n_windows)
        prof = dfa_profile(sub, windows=windows)
        phase.dfa = estimate_h_dfa(prof)
        phase.dfa_curve = profile_csv(prof)
    except LrdError as exc:
        phase.dfa_error = str(exc)
    try:
        path = aggregate(sub)
        scales = default_scales(path, mode="band", band=config.band, n_scales=config.n_scales)
        spec = scale_spectrum(path, scales=scales, mode="band", band=config.band)
        est = estimate_h_wavelet(spec, regression=config.regression)
        gof = goodness_of_fit(spec, est, level=config.gof_level)
        phase.wavelet = dataclasses.replace(est, gof=gof)
        phase.spectrum = spec
    except LrdError as exc:
        phase.wavelet_error = str(exc)
    return phase


def analyze(series: UniformSeries, config: AnalyzeConfig = AnalyzeConfig(),
            subject: str = "", cleaning: CleanResult | None = None) -> AnalysisReport:
    """Full pipeline: segment the series and estimate H per phase and overall.

    Stage failures inside a phase are recorded on the report rather than
    aborting the run.
    """
    warnings_list = []
    n = len(series)
    if n < config.min_samples:
        warnings_list.append(
            f"series has {n} samples; fewer than {config.min_samples} makes "
            "per-phase estimates unreliable"
        )
    downsample = max(1, math.ceil(n / config.detect_max_n))
    if downsample > 1:
        warnings_list.append(f"change detection ran on a 1/{downsample} decimated series")
    scan = select_k(series, k_max=config.k_max, min_seg=config.min_seg,
                    elbow_ratio=config.elbow_ratio, downsample=downsample)
    segmentation = detect_k(series, scan.selected_k, min_seg=config.min_seg,
                            downsample=downsample)
    bounds = segmentation.bounds()
    phases = []
    for name, seg_lo, seg_hi in _phase_names(segmentation.k):
        lo = bounds[seg_lo][0]
        hi = bounds[seg_hi][1]
        phases.append(_estimate_phase(series, lo, hi, name, config))
    whole = _estimate_phase(series, 0, n, "whole", config)

    comparison = None
    dfa_vals = [p.dfa.h_hat for p in phases if p.dfa is not None]
    wav_vals = [p.wavelet.h_hat for p in phases if p.wavelet is not None]
    if len(dfa_vals) >= 2 and len(wav_vals) >= 2:
        comparison = anova_f([dfa_vals, wav_vals], labels=("dfa", "wavelet"))

    return AnalysisReport(
        subject=subject, series=series, config=config, scan=scan,
        segmentation=segmentation, phases=phases, whole=whole,
        comparison=comparison, warnings=warnings_list, cleaning=cleaning,
    )


# ---------------------------------------------------------------------------
# deterministic serialization
# ---------------------------------------------------------------------------

def _round_floats(obj):
    """Round every float to 9 significant digits; non-finite become strings."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return repr(obj)
        return float(f"{obj:.9g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, (np.floating,)):
        return _round_floats(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def to_json(payload: dict) -> str:
    return json.dumps(_round_floats(payload), sort_keys=True, indent=2) + "\n"


def _summary_line(report: AnalysisReport) -> str:
    def cell(phase):
        if phase is None:
            return "-"
        parts = []
        for est, err in ((phase.dfa, phase.dfa_error), (phase.wavelet, phase.wavelet_error)):
            if err is not None:
                parts.append("failed")
            else:
                star = ""
                if est.gof is not None and not est.gof.accepted:
                    star = "*"
                parts.append(f"{est.h_hat:.3f}{star}")
        return "/".join(parts)

    by_name = {p.name: p for p in report.phases}
    cols = [report.subject or "-", cell(report.whole)]
    for name in ("beginning", "middle", "end"):
        cols.append(cell(by_name.get(name)))
    return "  ".join(f"{c:>16}" for c in cols)


SUMMARY_HEADER = "  ".join(
    f"{c:>16}" for c in ("subject", "whole d/w", "beginning d/w", "middle d/w", "end d/w")
) + "\n" + " (wavelet entries are starred when the goodness-of-fit test rejects)"


def emit(report: AnalysisReport, out_dir) -> list:
    """Write report.json, segments.json, per-phase plot CSVs and summary.txt.

    Returns the list of written paths.  Phases whose estimation failed get
    no plot files and are marked ``failed`` in the summary.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def write(name: str, payload: str):
        path = out / name
        if path in written:  # a K=1 segmentation aliases the "whole" phase
            return
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(payload)
        written.append(path)

    write("report.json", to_json(report.to_dict()))
    write("segments.json", to_json(report.segmentation.to_dict()))
    for phase in list(report.phases) + [report.whole]:
        if phase.spectrum is not None:
            write(f"spectrum_{phase.name}.csv", phase.spectrum.to_csv())
        if phase.dfa_curve is not None:
            write(f"dfa_{phase.name}.csv", phase.dfa_curve)
    write("summary.txt", SUMMARY_HEADER + "\n" + _summary_line(report) + "\n")
    return written


# ---------------------------------------------------------------------------
# command-line interface
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with code 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _load_config(path: str | None, overrides: dict) -> AnalyzeConfig:
    data = {}
    if path:
        p = Path(path)
        if p.suffix.lower() == ".toml":
            try:
                import tomllib
            except ModuleNotFoundError:
                import tomli as tomllib
            with open(p, "rb") as fh:
                data = tomllib.load(fh)
        else:
            with open(p, "r", encoding="utf-8") as fh:
                data = json.load(fh)
    data.update({k: v for k, v in overrides.items() if v is not None})
    return AnalyzeConfig.from_dict(data)


def _parse_trend(args) -> object | None:
    if args.trend_poly:
        return PolynomialTrend(tuple(float(c) for c in args.trend_poly.split(",")))
    if args.trend_levels:
        levels_part, _, breaks_part = args.trend_levels.partition("@")
        levels = tuple(float(v) for v in levels_part.split(","))
        breaks = tuple(float(v) for v in breaks_part.split(",")) if breaks_part else ()
        return PiecewiseConstantTrend(levels, breaks)
    return None


def _cmd_synth(args) -> int:
    if args.kind == "fgn":
        series = generate_fgn(
            FgnParams(hurst=args.hurst, sigma2=args.sigma2, length=args.n, seed=args.seed),
            delta=args.delta,
        )
    else:
        profile = SpectralProfile(
            hurst_band=args.hurst, sigma=args.sigma,
            omega0=args.band[0], omega1=args.band[1],
            h_low=args.h_low, h_high=args.h_high,
        )
        series = generate_lfgn(profile, n=args.n, delta=args.delta, seed=args.seed,
                               oversample=args.oversample)
    trend = _parse_trend(args)
    if trend is not None:
        series = add_trend(series, trend)
    write_csv(series, args.out)
    print(f"wrote {args.n} samples to {args.out}")
    return 0


def _cmd_segment(args) -> int:
    series = read_csv(args.input)
    downsample = args.downsample or max(1, math.ceil(len(series) / args.detect_max_n))
    if args.k is not None:
        seg = detect_k(series, args.k, min_seg=args.min_seg, downsample=downsample)
        scan_dict = None
    else:
        scan = select_k(series, k_max=args.k_max, min_seg=args.min_seg,
                        elbow_ratio=args.elbow_ratio, downsample=downsample)
        seg = detect_k(series, scan.selected_k, min_seg=args.min_seg, downsample=downsample)
        scan_dict = scan.to_dict()
    payload = seg.to_dict()
    if scan_dict is not None:
        payload["scan"] = scan_dict
    text = to_json(payload)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _estimate_to_stdout(est: FractalEstimate, extra: dict | None = None):
    payload = {
        "h": est.h_hat, "slope": est.slope, "stderr": est.stderr,
        "ci_halfwidth": est.ci_halfwidth, "method": est.method,
    }
    if est.gof is not None:
        payload["gof"] = {
            "statistic": est.gof.statistic, "dof": est.gof.dof,
            "p_value": est.gof.p_value, "accepted": est.gof.accepted,
        }
    if extra:
        payload.update(extra)
    sys.stdout.write(to_json(payload))


def _cmd_dfa(args) -> int:
    series = read_csv(args.input)
    windows = None
    if args.windows:
        windows = [int(w) for w in args.windows.split(",")]
    prof = dfa_profile(series, windows=windows)
    est = estimate_h_dfa(prof)
    if args.out:
        Path(args.out).write_text(profile_csv(prof), encoding="utf-8")
    _estimate_to_stdout(est)
    return 0


def _wavelet_spectrum(args) -> tuple:
    series = read_csv(args.input)
    if args.aggregate:
        series = aggregate(series)
    band = tuple(args.band) if args.mode == "band" else None
    scales = default_scales(series, mode=args.mode, band=band, n_scales=args.n_scales)
    spec = scale_spectrum(series, scales=scales, mode=args.mode, band=band)
    est = estimate_h_wavelet(spec, regression=args.regression)
    return spec, est


def _cmd_wavelet(args) -> int:
    spec, est = _wavelet_spectrum(args)
    if args.out:
        Path(args.out).write_text(spec.to_csv(), encoding="utf-8")
    _estimate_to_stdout(est)
    return 0


def _cmd_gof(args) -> int:
    spec, est = _wavelet_spectrum(args)
    gof = goodness_of_fit(spec, est, level=args.level)
    est = dataclasses.replace(est, gof=gof)
    if args.out:
        Path(args.out).write_text(spec.to_csv(), encoding="utf-8")
    _estimate_to_stdout(est)
    return 0


def _cmd_analyze(args) -> int:
    overrides = {
        "k_max": args.k_max, "min_seg": args.min_seg, "elbow_ratio": args.elbow_ratio,
        "detect_max_n": args.detect_max_n, "n_scales": args.n_scales,
        "n_windows": args.n_windows, "gof_level": args.gof_level,
        "rate_hz": args.rate_hz, "regression": args.regression,
    }
    if args.band is not None:
        overrides["band"] = tuple(args.band)
    config = _load_config(args.config, overrides)

    cleaning = None
    parsed = ingest(args.input, fmt=args.format)
    if isinstance(parsed, RawRecording):
        cleaning = clean_and_resample(parsed, rate_hz=config.rate_hz)
        series = cleaning.series
        subject = args.subject or parsed.subject_id
    else:
        series = parsed
        subject = args.subject or Path(args.input).stem

    report = analyze(series, config=config, subject=subject, cleaning=cleaning)
    if args.out:
        paths = emit(report, args.out)
        if cleaning is not None:
            write_csv(series, Path(args.out) / "resampled.csv")
            paths.append(Path(args.out) / "resampled.csv")
        print(f"wrote {len(paths)} files to {args.out}")
    else:
        sys.stdout.write(to_json(report.to_dict()))
    return 0


def _cmd_benchmark(args) -> int:
    h_values = [float(h) for h in args.h.split(",")]
    report = benchmark_estimators(h_values, n=args.n, reps=args.reps, seed=args.seed,
                                  regression=args.regression, n_jobs=args.jobs)
    sys.stdout.write(report.to_text())
    if args.out:
        Path(args.out).write_text(report.to_csv(), encoding="utf-8")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="lrdkit", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="generate synthetic sample paths")
    p.add_argument("kind", choices=["fgn", "lfgn"])
    p.add_argument("--hurst", type=float, required=True)
    p.add_argument("--sigma2", type=float, default=1.0, help="variance scale (fgn)")
    p.add_argument("--sigma", type=float, default=1.0, help="spectral scale (lfgn)")
    p.add_argument("--band", type=float, nargs=2, default=[0.2, 4.0], metavar=("W0", "W1"))
    p.add_argument("--h-low", type=float, default=0.5)
    p.add_argument("--h-high", type=float, default=None)
    p.add_argument("--oversample", type=int, default=1)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trend-poly", help="polynomial trend coefficients c0,c1,...")
    p.add_argument("--trend-levels", help="piecewise trend 'v1,v2,...@f1,f2,...'")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("segment", help="change-point detection")
    p.add_argument("input")
    p.add_argument("--k", type=int, help="fixed number of segments")
    p.add_argument("--k-max", type=int, default=8)
    p.add_argument("--min-seg", type=int, default=20)
    p.add_argument("--elbow-ratio", type=float, default=5.0)
    p.add_argument("--downsample", type=int, help="explicit decimation stride")
    p.add_argument("--detect-max-n", type=int, default=4000)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_segment)

    p = sub.add_parser("dfa", help="detrended fluctuation analysis")
    p.add_argument("input")
    p.add_argument("--windows", help="comma-separated window lengths")
    p.add_argument("--out", help="write the w,F profile CSV here")
    p.set_defaults(func=_cmd_dfa)

    for name, help_text in (("wavelet", "wavelet spectrum and H estimate"),
                            ("gof", "wavelet estimate plus goodness-of-fit test")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input")
        p.add_argument("--mode", choices=["lrd", "selfsimilar", "band"], default="lrd")
        p.add_argument("--band", type=float, nargs=2, default=[0.2, 4.0], metavar=("W0", "W1"))
        p.add_argument("--n-scales", type=int, default=12)
        p.add_argument("--regression", choices=["ols", "gls"], default="gls")
        p.add_argument("--aggregate", action="store_true",
                       help="cumulative-sum the series before analysis")
        p.add_argument("--out", help="write the scale-spectrum CSV here")
        if name == "gof":
            p.add_argument("--level", type=float, default=0.05)
            p.set_defaults(func=_cmd_gof)
        else:
            p.set_defaults(func=_cmd_wavelet)

    p = sub.add_parser("analyze", help="full pipeline over one recording")
    p.add_argument("input")
    p.add_argument("--format", choices=["uniform-csv", "rr-ms"], default="uniform-csv")
    p.add_argument("--subject")
    p.add_argument("--config", help="TOML or JSON file of AnalyzeConfig values")
    p.add_argument("--out", help="output directory (defaults to stdout JSON)")
    p.add_argument("--k-max", type=int)
    p.add_argument("--min-seg", type=int)
    p.add_argument("--elbow-ratio", type=float)
    p.add_argument("--detect-max-n", type=int)
    p.add_argument("--band", type=float, nargs=2, metavar=("W0", "W1"))
    p.add_argument("--n-scales", type=int)
    p.add_argument("--n-windows", type=int)
    p.add_argument("--gof-level", type=float)
    p.add_argument("--rate-hz", type=float)
    p.add_argument("--regression", choices=["ols", "gls"])
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("benchmark", help="Monte Carlo benchmark of both estimators")
    p.add_argument("--h", default="0.5,0.6,0.7,0.8,0.9", help="comma-separated H values")
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--regression", choices=["ols", "gls"], default="gls")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="write the CSV table here")
    p.set_defaults(func=_cmd_benchmark)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, DataQualityError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (NumericalError, DegenerateDataError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    except LrdError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
