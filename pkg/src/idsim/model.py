"""Constellations, channel draws, noise, and power accounting.

Everything random takes an explicit ``numpy.random.Generator`` so results
are reproducible and trial-parallel safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Gains with magnitude below this are treated as deep fades and resampled,
# keeping the dissolution factor numerically safe.
EPS_GAIN = 1e-3

# Rayleigh scale for unit mean-square gain: E[R^2] = 2*scale^2 = 1.
_RAYLEIGH_SCALE = 1.0 / np.sqrt(2.0)


@dataclass
class PamConstellation:
    """Symmetric PAM alphabet ``a_s * {+-1, ..., +-q_s}`` (zero excluded).

    The zero symbol is excluded so that dissolution never divides by a
    vanishing symbol; the alphabet has exactly ``2 * q_s`` points.
    """

    a_s: float
    q_s: int

    def __post_init__(self) -> None:
        if self.a_s <= 0:
            raise ValueError(f"amplitude step must be positive, got {self.a_s}")
        if self.q_s < 1 or int(self.q_s) != self.q_s:
            raise ValueError(f"half-size must be a positive integer, got {self.q_s}")
        self.q_s = int(self.q_s)

    @property
    def points(self) -> np.ndarray:
        """Alphabet points in ascending order, ``[-q_s..-1, 1..q_s] * a_s``."""
        levels = np.concatenate([np.arange(-self.q_s, 0), np.arange(1, self.q_s + 1)])
        return self.a_s * levels.astype(float)

    @property
    def size(self) -> int:
        return 2 * self.q_s

    @property
    def power(self) -> float:
        """Average symbol power ``a_s^2 (q_s+1)(2 q_s+1) / 6`` (exact)."""
        return self.a_s**2 * (self.q_s + 1) * (2 * self.q_s + 1) / 6.0

    @property
    def min_abs(self) -> float:
        return self.a_s

    @property
    def max_abs(self) -> float:
        return self.a_s * self.q_s

    def draw(self, rng: np.random.Generator, size=None) -> np.ndarray:
        """Uniform draw from the alphabet."""
        return rng.choice(self.points, size=size)

    def nearest(self, x) -> np.ndarray:
        """Nearest alphabet point(s) to ``x`` (ties resolve to the lower point)."""
        pts = self.points
        idx = np.abs(np.asarray(x)[..., None] - pts).argmin(axis=-1)
        return pts[idx]


def build_constellation(a_s: float, q_s: int) -> PamConstellation:
    """Build the alphabet with amplitude step ``a_s`` and half-size ``q_s``."""
    return PamConstellation(a_s=a_s, q_s=q_s)


def amplitude_for_power(p: float, q_s: int) -> float:
    """Amplitude step so that the alphabet's average power is exactly ``p``.

    Inverts the exact power formula: ``a_s = sqrt(6 p / ((q_s+1)(2 q_s+1)))``.
    """
    if p <= 0:
        raise ValueError(f"power must be positive, got {p}")
    if q_s < 1:
        raise ValueError(f"half-size must be a positive integer, got {q_s}")
    return float(np.sqrt(6.0 * p / ((q_s + 1) * (2 * q_s + 1))))


def constellation_for_power(p: float, q_s: int) -> PamConstellation:
    """Alphabet with half-size ``q_s`` scaled to average power ``p``."""
    return PamConstellation(a_s=amplitude_for_power(p, q_s), q_s=q_s)


@dataclass
class ChannelRealization:
    """Real channel gains: ``h`` per transmitted symbol, ``g`` per antenna.

    With ``k <= n`` the symbol gains are a sub-vector of the antenna gains.
    With ``k > n`` several symbols share an antenna, so ``sum h^2`` exceeds
    ``sum g^2``; consecutive symbol pairs then ride the same gain.
    """

    h: np.ndarray
    g: np.ndarray

    def __post_init__(self) -> None:
        self.h = np.atleast_1d(np.asarray(self.h, dtype=float))
        self.g = np.atleast_1d(np.asarray(self.g, dtype=float))
        if not (np.isfinite(self.h).all() and np.isfinite(self.g).all()):
            raise ValueError("channel gains must be finite")

    @property
    def k(self) -> int:
        return self.h.shape[-1]

    @property
    def n(self) -> int:
        return self.g.shape[-1]


def _signed_rayleigh(rng: np.random.Generator, size) -> np.ndarray:
    """Real gains: Rayleigh magnitude with E[h^2] = 1 and random sign.

    Magnitudes below ``EPS_GAIN`` are resampled.
    """
    mag = rng.rayleigh(scale=_RAYLEIGH_SCALE, size=size)
    bad = mag < EPS_GAIN
    while np.any(bad):
        mag[bad] = rng.rayleigh(scale=_RAYLEIGH_SCALE, size=int(bad.sum()))
        bad = mag < EPS_GAIN
    sign = rng.integers(0, 2, size=size) * 2 - 1
    return mag * sign


def symbol_antenna_map(k: int, n: int) -> np.ndarray:
    """Antenna index carrying each of the ``k`` symbols.

    For ``k <= n`` symbol i uses antenna i. For ``k > n`` the symbols are
    split into ``n`` contiguous blocks (smaller blocks first, matching the
    two-antenna split of floor(k/2) then the rest).
    """
    if k <= n:
        return np.arange(k)
    base, rem = divmod(k, n)
    counts = [base] * (n - rem) + [base + 1] * rem
    return np.repeat(np.arange(n), counts)


def draw_channel(k: int, n: int, rng: np.random.Generator) -> ChannelRealization:
    """Draw one channel: ``n`` antenna gains and the ``k`` symbol gains."""
    if k < 2:
        raise ValueError(f"need at least two symbols, got k={k}")
    if n < 2:
        raise ValueError(f"need at least two antennas, got n={n}")
    g = _signed_rayleigh(rng, n)
    h = g[symbol_antenna_map(k, n)]
    return ChannelRealization(h=h, g=g)


def draw_channels(k: int, n: int, count: int, rng: np.random.Generator):
    """Batched channel draw: returns ``(h, g)`` of shapes (count, k), (count, n)."""
    g = _signed_rayleigh(rng, (count, n))
    h = g[:, symbol_antenna_map(k, n)]
    return h, g


@dataclass
class NoiseModel:
    """Zero-mean AWGN with variance ``sigma2``, independent across uses."""

    sigma2: float

    def __post_init__(self) -> None:
        if self.sigma2 <= 0:
            raise ValueError(f"noise variance must be positive, got {self.sigma2}")

    def sample(self, rng: np.random.Generator, size=None) -> np.ndarray:
        return rng.normal(0.0, np.sqrt(self.sigma2), size=size)


def awgn(sigma2: float, rng: np.random.Generator, size=None) -> np.ndarray:
    """Zero-mean Gaussian sample(s) with variance ``sigma2``."""
    return NoiseModel(sigma2).sample(rng, size=size)


@dataclass
class PowerBudget:
    """Per-symbol power ``p`` with its SNR ``zeta = p / sigma2`` bookkeeping."""

    p: float
    zeta: float
    zeta_db: float

    def __post_init__(self) -> None:
        if self.p <= 0 or self.zeta <= 0:
            raise ValueError("power and SNR must be positive")
        if abs(self.zeta_db - 10.0 * np.log10(self.zeta)) > 1e-12 * max(1.0, abs(self.zeta_db)):
            raise ValueError("zeta_db inconsistent with zeta")

    @property
    def sigma2(self) -> float:
        return self.p / self.zeta

    @classmethod
    def from_power(cls, p: float, sigma2: float) -> "PowerBudget":
        zeta = p / sigma2
        return cls(p=p, zeta=zeta, zeta_db=10.0 * np.log10(zeta))

    @classmethod
    def from_zeta_db(cls, zeta_db: float, sigma2: float = 1.0) -> "PowerBudget":
        zeta = 10.0 ** (zeta_db / 10.0)
        return cls(p=zeta * sigma2, zeta=zeta, zeta_db=zeta_db)
