"""Configuration averages of ``cos(q . r)`` over interatomic separations.

Three schemes are supported:

* ``Shell``  -- isotropic orientation average, radius uniform on a window of
  one wavelength either side of the typical spacing ``l``;
* ``Volume`` -- isotropic orientation average, radius uniform on ``[0, 2R]``;
* ``Sampled`` -- explicit random cloud of ``N`` atoms in the cube ``[-R, R]^3``,
  averaged over all atom pairs.

The radial measures are uniform in ``r`` (no ``r**2`` weight). The isotropic
orientation average of ``cos(q . r)`` is ``sinc(q r)``, so the two smooth
schemes reduce to sine integrals. Quadrature is kept as a second route.

Clouds are drawn with numpy's PCG64 bit generator
(``numpy.random.Generator(numpy.random.PCG64(seed))``), uniform per coordinate.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.integrate import quad
from scipy.special import sici

from .physics import K_LASER, BandPair, MomentumTransfers, g2_from_cosines

SMALL_ARG = 1e-6


@dataclass(frozen=True)
class Shell:
    l: float = 20.0
    k_laser: float = K_LASER

    name = "shell"

    def __post_init__(self):
        if not self.l - 2.0 * math.pi / self.k_laser > 0:
            raise ValueError(f"shell radius l={self.l} must exceed one wavelength")

    @property
    def window(self):
        half = 2.0 * math.pi / self.k_laser
        return self.l - half, self.l + half


@dataclass(frozen=True)
class Volume:
    R: float = 100.0

    name = "volume"

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError(f"volume radius must be positive, got R={self.R}")


@dataclass(frozen=True)
class Sampled:
    R: float = 100.0
    N: int = 300
    seed: int = 0
    realizations: int = 1

    name = "sample"

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError(f"cube half-width must be positive, got R={self.R}")
        if self.N < 2:
            raise ValueError(f"sampled averaging needs N >= 2 atoms, got N={self.N}")
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


AveragingScheme = Union[Shell, Volume, Sampled]


@dataclass(frozen=True, eq=False)
class AtomCloud:
    positions: np.ndarray
    seed: int
    box_half: float

    @property
    def n_atoms(self) -> int:
        return len(self.positions)

    def separations(self) -> np.ndarray:
        """``r_i - r_j`` for every unordered pair ``i < j``."""
        i, j = np.triu_indices(self.n_atoms, k=1)
        return self.positions[i] - self.positions[j]


def orientation_average(q, r):
    """Mean of ``cos(q_vec . r_vec)`` over all orientations, i.e. ``sin(qr)/(qr)``."""
    x = np.abs(np.asarray(q, dtype=float) * np.asarray(r, dtype=float))
    small = x < SMALL_ARG
    safe = np.where(small, 1.0, x)
    out = np.where(small, 1.0 - x * x / 6.0, np.sin(safe) / safe)
    return out[()] if out.ndim == 0 else out


def _sinc_integral(a, b, q):
    """Integral of ``sin(q r)/(q r)`` over ``r`` in ``[a, b]`` by adaptive quadrature."""
    if q == 0.0:
        return b - a
    # work in x = q r, where the oscillation period is fixed
    xa, xb = q * a, q * b
    total = 0.0
    split = min(max(xa, math.pi), xb)
    if split > xa:
        total += quad(lambda x: orientation_average(1.0, x), xa, split,
                      epsabs=1e-13, epsrel=1e-13, limit=200)[0]
    if xb > split:
        total += quad(lambda x: 1.0 / x, split, xb, weight="sin", wvar=1.0,
                      epsabs=1e-13, epsrel=1e-12, limit=5000)[0]
    return total / q


def shell_average(q, l: float = 20.0, k_laser: float = K_LASER, method: str = "si"):
    """Shell-averaged ``cos(q . r)``: mean of ``sinc(q r)`` for ``r`` in ``l +- lambda``.

    ``method="si"`` uses the sine-integral closed form,
    ``method="quad"`` adaptive oscillatory quadrature. Accepts array ``q``.
    """
    a, b = Shell(l, k_laser).window
    width = b - a
    q = np.abs(np.asarray(q, dtype=float))
    if method == "quad":
        out = np.vectorize(lambda qq: _sinc_integral(a, b, qq) / width, otypes=[float])(q)
    elif method == "si":
        small = q * b < SMALL_ARG
        qs = np.where(small, 1.0, q)
        closed = (sici(qs * b)[0] - sici(qs * a)[0]) / (qs * width)
        series = 1.0 - q * q * (b ** 3 - a ** 3) / (18.0 * width)
        out = np.where(small, series, closed)
    else:
        raise ValueError(f"unknown method {method!r}")
    return out[()] if out.ndim == 0 else out


def volume_average(q, R: float = 100.0, method: str = "si"):
    """Volume-averaged ``cos(q . r)``: ``Si(2qR) / (2qR)``, equal to 1 at ``q = 0``."""
    Volume(R)
    q = np.abs(np.asarray(q, dtype=float))
    if method == "quad":
        out = np.vectorize(lambda qq: _sinc_integral(0.0, 2.0 * R, qq) / (2.0 * R),
                           otypes=[float])(q)
    elif method == "si":
        x = 2.0 * q * R
        small = x < SMALL_ARG
        xs = np.where(small, 1.0, x)
        out = np.where(small, 1.0 - x * x / 18.0, sici(xs)[0] / xs)
    else:
        raise ValueError(f"unknown method {method!r}")
    return out[()] if out.ndim == 0 else out


def sample_cloud(scheme: Sampled, realization: int = 0) -> AtomCloud:
    """Uniform random cloud in ``[-R, R]^3``; realization ``k`` uses seed ``seed + k``."""
    seed = (scheme.seed + realization) % 2 ** 64
    rng = np.random.Generator(np.random.PCG64(seed))
    positions = rng.uniform(-scheme.R, scheme.R, size=(scheme.N, 3))
    return AtomCloud(positions, seed, scheme.R)


@functools.lru_cache(maxsize=16)
def _cached_separations(scheme: Sampled):
    seps = []
    for k in range(scheme.realizations):
        s = sample_cloud(scheme, k).separations()
        s.setflags(write=False)
        seps.append(s)
    return tuple(seps)


def _mean_cos(separations: np.ndarray, q_vectors: np.ndarray, chunk: int = 64):
    flat = q_vectors.reshape(-1, 3)
    out = np.empty(len(flat))
    for start in range(0, len(flat), chunk):
        block = flat[start:start + chunk]
        out[start:start + chunk] = np.cos(separations @ block.T).mean(axis=0)
    return out.reshape(q_vectors.shape[:-1])


def sampled_average(cloud, q_vector):
    """Mean of ``cos(q_vec . r_ij)`` over all atom pairs of ``cloud``.

    ``cloud`` is an :class:`AtomCloud` or a :class:`Sampled` scheme; for a
    scheme the result is also averaged over its realizations. ``q_vector`` may
    carry leading batch axes.
    """
    q_vector = np.asarray(q_vector, dtype=float)
    if isinstance(cloud, Sampled):
        seps = _cached_separations(cloud)
    else:
        if cloud.n_atoms < 2:
            raise ValueError("need at least two atoms for a pair average")
        seps = (cloud.separations(),)
    out = sum(_mean_cos(s, q_vector) for s in seps) / len(seps)
    return out[()] if np.ndim(out) == 0 else out


def kernel_average(scheme: AveragingScheme, q_magnitude, q_vector=None):
    """Scheme average of ``cos(q . r)``; ``q_vector`` is required for ``Sampled``."""
    if isinstance(scheme, Shell):
        return shell_average(q_magnitude, scheme.l, scheme.k_laser)
    if isinstance(scheme, Volume):
        return volume_average(q_magnitude, scheme.R)
    if isinstance(scheme, Sampled):
        if q_vector is None:
            raise ValueError("sampled averaging needs the full momentum-transfer vector")
        return sampled_average(scheme, q_vector)
    raise TypeError(f"unknown averaging scheme {scheme!r}")


def averaged_pair_correlation(pair: BandPair, tau, transfers: MomentumTransfers,
                              scheme: AveragingScheme, gamma: float = 1.0):
    """Configuration-averaged band correlation ``g2(tau)``.

    Each ``cos(delta_plus)`` and ``cos(delta_minus)`` in the single-pair result
    is replaced by its scheme average at ``q_plus`` / ``q_minus``.
    """
    cos_plus = kernel_average(scheme, transfers.q_plus, transfers.plus_vector)
    cos_minus = kernel_average(scheme, transfers.q_minus, transfers.minus_vector)
    return g2_from_cosines(pair, tau, cos_plus, cos_minus, gamma)


def monte_carlo_kernel_average(scheme: Union[Shell, Volume], q: float, n_samples: int,
                               rng: np.random.Generator, chunk: int = 1_000_000):
    """Brute-force estimate of a smooth scheme's average of ``cos(q . r)``.

    Draws the radius from the scheme's radial measure and an isotropic
    orientation. Returns ``(mean, standard_error)``.
    """
    if isinstance(scheme, Shell):
        lo, hi = scheme.window
    elif isinstance(scheme, Volume):
        lo, hi = 0.0, 2.0 * scheme.R
    else:
        raise TypeError("Monte Carlo oracle covers the shell and volume schemes only")
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        r = rng.uniform(lo, hi, m)
        # projection of a uniform unit vector on any axis is uniform on [-1, 1]
        n_z = rng.uniform(-1.0, 1.0, m)
        c = np.cos(q * r * n_z)
        total += c.sum()
        total_sq += (c * c).sum()
        done += m
    mean = total / n_samples
    var = max(total_sq / n_samples - mean * mean, 0.0)
    return mean, math.sqrt(var / (n_samples - 1))
