"""Exact synthesis of fractional and locally fractional Gaussian noise.

Two generators:

* :func:`generate_fgn` draws fractional Gaussian noise (FGN) by circulant
  embedding of the covariance, falling back to a dense Cholesky factorization
  when the embedding is not nonnegative; the sampled distribution is exact in
  both branches.
* :func:`generate_lfgn` draws locally fractional Gaussian noise: the
  stationary increment process of a harmonizable Gaussian process whose
  spectral weight follows a power law ``|xi|**(H + 1/2) / sigma`` only inside
  a frequency band ``[omega0, omega1]``.  In that band the fractality
  exponent H may be any real number, not just (0, 1).

Both are deterministic functions of their seed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ParameterError
from .series import UniformSeries

# Relative eigenvalue tolerance below which the circulant embedding is
# declared invalid (rather than rounding noise) and the dense path is taken.
_EMBED_TOL = 1e-10


@dataclass(frozen=True)
class FgnParams:
    """Parameters of a fractional Gaussian noise sample path."""

    hurst: float
    sigma2: float = 1.0
    length: int = 1024
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.hurst < 1.0:
            raise ParameterError(f"FGN requires 0 < H < 1, got H={self.hurst}")
        if not self.sigma2 > 0:
            raise ParameterError(f"variance scale must be positive, got {self.sigma2}")
        if self.length < 2:
            raise ParameterError(f"need at least 2 samples, got {self.length}")


def fgn_autocovariance(params: FgnParams, lag: int | np.ndarray) -> float | np.ndarray:
    """Autocovariance of FGN at integer lag k.

    r(k) = (sigma2 / 2) * (|k+1|^(2H) - 2|k|^(2H) + |k-1|^(2H)); for
    H > 1/2 this decays like sigma2 * H * (2H-1) * k^(2H-2), the hallmark
    of long-range dependence.
    """
    k = np.asarray(lag, dtype=np.float64)
    if np.any(k < 0):
        raise ParameterError("lag must be nonnegative")
    two_h = 2.0 * params.hurst
    r = 0.5 * params.sigma2 * (
        np.abs(k + 1) ** two_h - 2.0 * np.abs(k) ** two_h + np.abs(k - 1) ** two_h
    )
    return float(r) if np.isscalar(lag) or np.ndim(lag) == 0 else r


def _fgn_circulant(params: FgnParams, rng: np.random.Generator) -> np.ndarray | None:
    """Davies-Harte draw; returns None when the embedding has a genuinely
    negative eigenvalue (caller then falls back to the dense path)."""
    n = params.length
    r = fgn_autocovariance(params, np.arange(n + 1))
    # First row of the 2n circulant: r(0..n) then r(n-1..1).
    row = np.concatenate([r, r[n - 1:0:-1]])
    eig = np.fft.fft(row).real
    if eig.min() < -_EMBED_TOL * eig.max():
        return None
    eig = np.clip(eig, 0.0, None)

    m = 2 * n
    z = np.empty(m, dtype=np.complex128)
    z[0] = rng.standard_normal()
    z[n] = rng.standard_normal()
    v = rng.standard_normal((n - 1, 2))
    z[1:n] = (v[:, 0] + 1j * v[:, 1]) / np.sqrt(2.0)
    z[n + 1:] = np.conj(z[1:n][::-1])
    path = np.sqrt(m) * np.fft.ifft(np.sqrt(eig) * z)
    return path.real[:n]


def _fgn_dense(params: FgnParams, rng: np.random.Generator) -> np.ndarray:
    """Exact draw through a Cholesky factor of the full covariance matrix.

    O(n^2) memory, so only sensible for the short paths where the circulant
    embedding may fail.
    """
    n = params.length
    r = fgn_autocovariance(params, np.arange(n))
    idx = np.arange(n)
    cov = r[np.abs(idx[:, None] - idx[None, :])]
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"FGN covariance factorization failed (H={params.hurst}, n={n})") from exc
    return chol @ rng.standard_normal(n)


def generate_fgn(params: FgnParams, delta: float = 1.0, t0: float = 0.0) -> UniformSeries:
    """Sample one zero-mean FGN path with the exact target autocovariance.

    The lag unit of the covariance is one sample regardless of ``delta``;
    ``delta`` only fixes the time stamps of the output grid.
    """
    rng = np.random.default_rng(params.seed)
    path = _fgn_circulant(params, rng)
    if path is None:
        path = _fgn_dense(params, rng)
    return UniformSeries(path, delta=delta, t0=t0)


@dataclass(frozen=True)
class SpectralProfile:
    """Piecewise power-law spectral weight rho(xi) of a locally fractional process.

    rho(xi) = |xi|^(H + 1/2) / sigma on the band [omega0, omega1]; outside,
    the exponent switches to ``h_low`` (below) or ``h_high`` (above) with the
    prefactor chosen so rho stays continuous.  Integrability of the process
    requires h_low < 1 and h_high > 0; the in-band exponent is unrestricted.

    Defaults: h_low = 0.5 and h_high = max(H, 0.5), which always satisfy the
    integrability constraints.  Estimation only ever probes in-band scales,
    so the continuation is a modeling convenience, not a fitted quantity.
    """

    hurst_band: float
    sigma: float = 1.0
    omega0: float = 0.2
    omega1: float = 4.0
    h_low: float = 0.5
    h_high: float | None = None

    def __post_init__(self):
        if self.h_high is None:
            object.__setattr__(self, "h_high", max(self.hurst_band, 0.5))
        if not (0.0 < self.omega0 < self.omega1):
            raise ParameterError(f"need 0 < omega0 < omega1, got [{self.omega0}, {self.omega1}]")
        if not self.sigma > 0:
            raise ParameterError(f"sigma must be positive, got {self.sigma}")
        if not self.h_low < 1.0:
            raise ParameterError(f"low-frequency exponent must be < 1, got {self.h_low}")
        if not self.h_high > 0.0:
            raise ParameterError(f"high-frequency exponent must be > 0, got {self.h_high}")

    def rho(self, xi) -> np.ndarray:
        """Evaluate the spectral weight on an array of frequencies (rad / time)."""
        x = np.abs(np.asarray(xi, dtype=np.float64))
        out = np.empty_like(x)
        lo = x < self.omega0
        hi = x > self.omega1
        mid = ~(lo | hi)
        out[mid] = x[mid] ** (self.hurst_band + 0.5)
        # Continuations pinned to the in-band law at the edges.
        with np.errstate(divide="ignore"):
            out[lo] = self.omega0 ** (self.hurst_band + 0.5) * (x[lo] / self.omega0) ** (self.h_low + 0.5)
        out[hi] = self.omega1 ** (self.hurst_band + 0.5) * (x[hi] / self.omega1) ** (self.h_high + 0.5)
        return out / self.sigma


def generate_lfgn(profile: SpectralProfile, n: int, delta: float = 1.0,
                  seed: int = 0, t0: float = 0.0, oversample: int = 1) -> UniformSeries:
    """Sample a locally fractional Gaussian noise path on a grid of step ``delta``.

    Synthesizes the step-``delta`` increment process of the harmonizable path
    in the frequency domain: complex Gaussian amplitudes on the grid
    ``xi_j = 2 pi j / (n delta)`` up to the Nyquist cutoff ``pi / delta`` are
    weighted by ``2 |sin(xi delta / 2)| / rho(xi)`` (the amplitude spectral
    density of the increments) and transformed back.  Band edges are snapped
    to the nearest grid frequency so the in-band law is exact on the grid.

    ``oversample > 1`` extends the synthesized spectrum to ``oversample``
    times the output Nyquist frequency before subsampling back to step
    ``delta``.  The band-limited default is exact whenever the band of
    interest lies inside the output Nyquist range; oversampling matters only
    when the continuation above Nyquist carries real energy (e.g. when
    emulating plain FGN, whose spectrum extends over the whole line).

    Aggregating the output reconstructs the harmonizable path itself, up to
    a random constant offset: the cumulative-sum filter cancels the
    ``2 sin(xi delta / 2)`` factor exactly.
    """
    if n < 2:
        raise ParameterError(f"need at least 2 samples, got {n}")
    if delta <= 0:
        raise ParameterError(f"sampling step must be positive, got {delta}")
    if oversample < 1:
        raise ParameterError(f"oversample factor must be >= 1, got {oversample}")
    span = n * delta
    if span * profile.omega0 < 8.0 * np.pi:  # fewer than ~4 periods of the band floor
        warnings.warn(
            f"series spans {span * profile.omega0 / (2 * np.pi):.2f} periods of the "
            "lowest band frequency; the in-band law will be poorly resolved",
            stacklevel=2,
        )

    m = n * oversample
    d_xi = 2.0 * np.pi / span
    xi = d_xi * np.arange(m // 2 + 1)

    # Snap band edges onto the frequency grid (at least one bin from DC).
    omega0 = max(round(profile.omega0 / d_xi), 1) * d_xi
    omega1 = max(round(profile.omega1 / d_xi), round(omega0 / d_xi) + 1) * d_xi
    snapped = SpectralProfile(
        hurst_band=profile.hurst_band, sigma=profile.sigma,
        omega0=omega0, omega1=omega1,
        h_low=profile.h_low, h_high=profile.h_high,
    )

    # The |sin| factor is the step-delta increment filter; above the output
    # Nyquist it folds the continuation energy back in, as sampling would.
    amp = np.zeros_like(xi)
    amp[1:] = 2.0 * np.abs(np.sin(xi[1:] * delta / 2.0)) / snapped.rho(xi[1:])

    rng = np.random.default_rng(seed)
    re = rng.standard_normal(xi.size)
    im = rng.standard_normal(xi.size)
    scale = np.sqrt(d_xi / (2.0 * np.pi))
    spec = amp * scale * (re + 1j * im) / np.sqrt(2.0)
    spec[0] = 0.0
    if m % 2 == 0:
        spec[-1] = amp[-1] * scale * re[-1]  # Nyquist bin must be real
    values = m * np.fft.irfft(spec, m)
    return UniformSeries(values[::oversample][:n], delta=delta, t0=t0)
