"""Abrupt-change detection in mean and variance by penalized contrast.

A series is split into K segments at unknown instants; each segment carries
its own (mean, std).  The per-segment lack-of-fit is the Gaussian
-2 log-likelihood evaluated at the plug-in estimates, which reduces to
``len * log(var)`` up to a constant that cancels in the minimization.  The
global minimizer over change instants is found exactly by dynamic
programming; the number of segments is chosen by scanning the optimal
contrast against K and keeping the last dominant drop of its slope.

Variance estimates are floored at a small fraction of the overall series
std so that locally constant stretches cannot drive the contrast to -inf.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintError, ParameterError
from .series import UniformSeries

MIN_SEG_DEFAULT = 20
ELBOW_RATIO_DEFAULT = 5.0
# Floor on the per-segment std, relative to the overall series std.
SIGMA_FLOOR_REL = 1e-6
# Absolute fallback when the whole series is constant.
SIGMA_FLOOR_ABS = 1e-12


@dataclass(frozen=True)
class Segmentation:
    """Ordered change instants plus per-segment parameters.

    ``taus`` are the internal boundaries: segment j covers samples
    ``[taus[j-1], taus[j])`` in 0-based half-open convention, with implicit
    0 and n at the ends.
    """

    n: int
    taus: tuple
    means: tuple
    stds: tuple
    contrast: float

    @property
    def k(self) -> int:
        return len(self.taus) + 1

    def bounds(self) -> list:
        edges = (0,) + self.taus + (self.n,)
        return [(edges[j], edges[j + 1]) for j in range(self.k)]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "K": self.k,
            "taus": list(self.taus),
            "segments": [
                {"lo": lo, "hi": hi, "mean": m, "std": s}
                for (lo, hi), m, s in zip(self.bounds(), self.means, self.stds)
            ],
            "contrast": self.contrast,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass(frozen=True)
class PenaltyScan:
    """Contrast-vs-K audit trail behind a selected segment count.

    ``betas[i]`` is the contrast improvement from K=i+1 to K=i+2;
    ``drops[i]`` = betas[i] - betas[i+1] measures how abruptly the
    improvements die off after K=i+2.
    """

    ks: tuple
    contrasts: tuple
    betas: tuple
    drops: tuple
    selected_k: int
    elbow_ratio: float

    def to_dict(self) -> dict:
        return {
            "ks": list(self.ks),
            "contrasts": list(self.contrasts),
            "betas": list(self.betas),
            "drops": list(self.drops),
            "selected_k": self.selected_k,
            "elbow_ratio": self.elbow_ratio,
        }


def _floor_std(values: np.ndarray) -> float:
    overall = float(values.std())
    return SIGMA_FLOOR_REL * overall if overall > 0 else SIGMA_FLOOR_ABS


def segment_contrast(series: UniformSeries, lo: int, hi: int,
                     min_seg: int = MIN_SEG_DEFAULT) -> tuple:
    """Plug-in (mean, std, contrast) of samples [lo, hi).

    The contrast is ``(hi - lo) * log(var)`` with the population variance
    floored; lower is better.
    """
    if not (0 <= lo < hi <= len(series)):
        raise ParameterError(f"segment [{lo}, {hi}) out of range for n={len(series)}")
    if hi - lo < min_seg:
        raise ConstraintError(f"segment [{lo}, {hi}) shorter than min_seg={min_seg}")
    seg = series.values[lo:hi]
    floor = _floor_std(series.values)
    mean = float(seg.mean())
    std = max(float(seg.std()), floor)
    contrast = (hi - lo) * float(np.log(std * std))
    return mean, std, contrast


def _dp_tables(x: np.ndarray, k_max: int, min_seg: int, floor_var: float):
    """Exact DP over all segmentations into 1..k_max segments.

    Segment costs come from prefix sums in O(1), so no n x n cost matrix is
    materialized; total work is O(k_max * n^2).
    """
    n = x.size
    s1 = np.concatenate([[0.0], np.cumsum(x)])
    s2 = np.concatenate([[0.0], np.cumsum(x * x)])

    def cost_to(j: int, i: np.ndarray) -> np.ndarray:
        m = j - i
        mean = (s1[j] - s1[i]) / m
        var = np.maximum((s2[j] - s2[i]) / m - mean * mean, floor_var)
        return m * np.log(var)

    best = np.full((k_max + 1, n + 1), np.inf)
    back = np.zeros((k_max + 1, n + 1), dtype=np.int64)
    ends = np.arange(min_seg, n + 1)
    best[1, min_seg:] = _first_row(s1, s2, ends, floor_var)
    for k in range(2, k_max + 1):
        lo_start = (k - 1) * min_seg
        for j in range(k * min_seg, n + 1):
            starts = np.arange(lo_start, j - min_seg + 1)
            cand = best[k - 1, starts] + cost_to(j, starts)
            t = int(np.argmin(cand))
            best[k, j] = cand[t]
            back[k, j] = lo_start + t
    return best, back


def _first_row(s1: np.ndarray, s2: np.ndarray, ends: np.ndarray, floor_var: float) -> np.ndarray:
    m = ends.astype(np.float64)
    mean = s1[ends] / m
    var = np.maximum(s2[ends] / m - mean * mean, floor_var)
    return m * np.log(var)


def _backtrack(back: np.ndarray, k: int, n: int) -> tuple:
    taus = []
    j = n
    for kk in range(k, 1, -1):
        j = int(back[kk, j])
        taus.append(j)
    return tuple(reversed(taus))


def _build_segmentation(series: UniformSeries, taus: tuple, min_seg: int) -> Segmentation:
    edges = (0,) + taus + (len(series),)
    means, stds, total = [], [], 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        m, s, c = segment_contrast(series, lo, hi, min_seg=min(min_seg, hi - lo))
        means.append(m)
        stds.append(s)
        total += c
    return Segmentation(n=len(series), taus=taus, means=tuple(means),
                        stds=tuple(stds), contrast=total)


def _decimate(series: UniformSeries, downsample: int) -> UniformSeries:
    return UniformSeries(series.values[::downsample],
                         delta=series.delta * downsample, t0=series.t0)


def _refine_taus(x: np.ndarray, taus: tuple, radius: int, min_seg: int,
                 floor_var: float) -> tuple:
    """Re-optimize each change instant within +-radius at full resolution.

    Decimated detection only places instants on the decimation grid; a local
    scan against the exact two-segment contrast removes that quantization.
    One left-to-right pass, neighbors held fixed.
    """
    n = x.size
    s1 = np.concatenate([[0.0], np.cumsum(x)])
    s2 = np.concatenate([[0.0], np.cumsum(x * x)])

    def cost(i, j):
        m = j - i
        mean = (s1[j] - s1[i]) / m
        var = np.maximum((s2[j] - s2[i]) / m - mean * mean, floor_var)
        return m * np.log(var)

    refined = list(taus)
    for idx, t in enumerate(refined):
        left = refined[idx - 1] if idx > 0 else 0
        right = refined[idx + 1] if idx + 1 < len(refined) else n
        lo = max(left + min_seg, t - radius)
        hi = min(right - min_seg, t + radius)
        if lo > hi:
            continue
        cand = np.arange(lo, hi + 1)
        total = cost(left, cand) + cost(cand, right)
        refined[idx] = int(cand[np.argmin(total)])
    return tuple(refined)


def detect_k(series: UniformSeries, k: int, min_seg: int = MIN_SEG_DEFAULT,
             downsample: int = 1) -> Segmentation:
    """Globally optimal segmentation of the series into exactly k segments.

    ``downsample`` > 1 decimates the series by that stride before detection
    and rescales the change instants back; use it for very long inputs where
    the O(k n^2) programme is too slow at full resolution.
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if downsample < 1:
        raise ParameterError("downsample stride must be >= 1")
    work = _decimate(series, downsample) if downsample > 1 else series
    n = len(work)
    if k * min_seg > n:
        raise ConstraintError(f"k={k} segments of >= {min_seg} samples do not fit n={n}")
    if k == 1:
        return _build_segmentation(series, (), min_seg)
    floor_var = _floor_std(work.values) ** 2
    best, back = _dp_tables(work.values, k, min_seg, floor_var)
    taus = _backtrack(back, k, n)
    if downsample > 1:
        taus = tuple(min(t * downsample, len(series) - 1) for t in taus)
        taus = _refine_taus(series.values, taus, radius=downsample,
                            min_seg=min_seg, floor_var=_floor_std(series.values) ** 2)
    return _build_segmentation(series, taus, min_seg)


def _select_from_contrasts(contrasts: np.ndarray, elbow_ratio: float) -> tuple:
    """Apply the dominant-drop rule to the optimal contrast curve.

    Returns (betas, drops, selected_k).  K = i+2 is a candidate when the
    drop at index i dominates every later drop by ``elbow_ratio``; the last
    drop has no later drops to dominate, so it can never be validated.  With
    no validated candidate the selection falls back to K = 1.
    """
    betas = -np.diff(contrasts)
    drops = betas[:-1] - betas[1:] if betas.size >= 2 else np.empty(0)
    selected = 1
    for i in range(drops.size - 1):
        tail = np.abs(drops[i + 1:]).max()
        if drops[i] > 0 and drops[i] >= elbow_ratio * tail:
            selected = i + 2
    return betas, drops, selected


def select_k(series: UniformSeries, k_max: int = 8, min_seg: int = MIN_SEG_DEFAULT,
             elbow_ratio: float = ELBOW_RATIO_DEFAULT, downsample: int = 1) -> PenaltyScan:
    """Scan K = 1..k_max and pick the segment count by the dominant-drop rule.

    The full scan (contrasts, slopes, drops) is returned for audit alongside
    the selected K.
    """
    if k_max < 2:
        raise ParameterError(f"k_max must be >= 2, got {k_max}")
    work = _decimate(series, downsample) if downsample > 1 else series
    n = len(work)
    if k_max * min_seg > n:
        raise ConstraintError(f"k_max={k_max} segments of >= {min_seg} samples do not fit n={n}")
    floor_var = _floor_std(work.values) ** 2
    best, _ = _dp_tables(work.values, k_max, min_seg, floor_var)
    contrasts = best[1:, n]
    betas, drops, selected = _select_from_contrasts(contrasts, elbow_ratio)
    return PenaltyScan(
        ks=tuple(range(1, k_max + 1)),
        contrasts=tuple(float(c) for c in contrasts),
        betas=tuple(float(b) for b in betas),
        drops=tuple(float(d) for d in drops),
        selected_k=selected,
        elbow_ratio=elbow_ratio,
    )
