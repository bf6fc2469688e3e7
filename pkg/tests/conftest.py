"""Shared fixtures: synthetic series with known properties.

Ensemble helpers are cached at module scope because several tests reuse the
same Monte Carlo draws; everything is seeded, so caching cannot couple tests.
"""

from functools import lru_cache

import numpy as np
import pytest

from lrdkit import FgnParams, UniformSeries, generate_fgn


@lru_cache(maxsize=32)
def fgn_ensemble(hurst: float, n: int, count: int, seed0: int = 0):
    """Tuple of FGN series with the given H, lengths n, seeds seed0..seed0+count-1."""
    return tuple(
        generate_fgn(FgnParams(hurst=hurst, sigma2=1.0, length=n, seed=seed0 + s))
        for s in range(count)
    )


def three_phase_surrogate(seed: int, n_phase: int = 4096, delta: float = 0.5,
                          hs=(1.1, 1.2, 1.3), means=(120.0, 155.0, 140.0),
                          stds=(3.0, 4.5, 7.0)) -> UniformSeries:
    """Race-like surrogate: three locally fractional phases with mean and
    variance shifts at the two boundaries and rising in-band exponents."""
    from lrdkit import SpectralProfile, generate_lfgn

    parts = []
    for i, (h, m, sd) in enumerate(zip(hs, means, stds)):
        prof = SpectralProfile(hurst_band=h, sigma=1.0, omega0=0.2, omega1=4.0, h_low=0.0)
        y = generate_lfgn(prof, n=n_phase, delta=delta, seed=seed * 7 + i).values
        parts.append(y / y.std() * sd + m)
    return UniformSeries(np.concatenate(parts), delta=delta)


@pytest.fixture
def white_noise_series():
    rng = np.random.default_rng(42)
    return UniformSeries(rng.standard_normal(4096))


@pytest.fixture
def constant_series():
    return UniformSeries(np.full(2048, 3.14))


@pytest.fixture
def fgn_path_07():
    return generate_fgn(FgnParams(hurst=0.7, sigma2=1.0, length=8192, seed=11))


@pytest.fixture
def fgn_path_08():
    return generate_fgn(FgnParams(hurst=0.8, sigma2=1.0, length=10000, seed=12))
