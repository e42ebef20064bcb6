"""Angular scans, delay curves, the Cauchy-Schwarz parameter and N-scaling."""

from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import __version__
from .averaging import AveragingScheme, averaged_pair_correlation, kernel_average
from .physics import (BandPair, DriveParams, UnsupportedConfigurationError,
                      averaged_weak_field_intensity, detector_wavevectors,
                      laser_wavevector, momentum_transfers,
                      strong_field_intensities)

SMALL_ANGLE_LIMIT = math.radians(10.0)
SINGULAR_DENOMINATOR = 1e-9

SCAN_VARIABLES = ("phi", "phi0", "tau")


class SmallAngleWarning(UserWarning):
    pass


class SingularPointError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ScanSpec:
    """What to scan. Angles in radians, delays in units of 1/gamma.

    ``phi``, ``phi0`` and ``tau`` hold the fixed values; the one named by
    ``variable`` is replaced by ``grid``.
    """

    variable: str
    grid: np.ndarray
    pair: BandPair
    schemes: tuple
    phi: float = 0.0
    phi0: float = 0.0
    tau: float = 0.0

    def __post_init__(self):
        if self.variable not in SCAN_VARIABLES:
            raise ValueError(f"scan variable must be one of {SCAN_VARIABLES}, got {self.variable!r}")
        grid = np.asarray(self.grid, dtype=float)
        if grid.ndim != 1 or grid.size == 0:
            raise ValueError("scan grid must be a non-empty 1-d sequence")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("scan grid must be strictly increasing")
        if self.variable == "tau" and grid[0] < 0:
            raise ValueError("delays must be non-negative")
        if not self.schemes:
            raise ValueError("at least one averaging scheme is required")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "schemes", tuple(self.schemes))

    def angles(self):
        """Broadcast ``(phi, phi0, tau)`` arrays over the grid."""
        values = {"phi": self.phi, "phi0": self.phi0, "tau": self.tau}
        values[self.variable] = self.grid
        return tuple(np.broadcast_to(values[k], self.grid.shape) for k in ("phi", "phi0", "tau"))


@dataclass
class CorrelationCurve:
    spec: ScanSpec
    values: dict
    metadata: dict = field(default_factory=dict)
    quantity: str = "g2"

    @property
    def abscissa(self) -> np.ndarray:
        return self.spec.grid


def scheme_metadata(scheme: AveragingScheme) -> dict:
    return {"scheme": scheme.name, **dataclasses.asdict(scheme)}


def _metadata(drive: DriveParams, schemes) -> dict:
    return {
        "drive": dataclasses.asdict(drive),
        "schemes": [scheme_metadata(s) for s in schemes],
        "version": __version__,
    }


def _require_resonance(drive: DriveParams):
    if not drive.on_resonance:
        raise UnsupportedConfigurationError(
            "band-resolved correlations are only available for resonant driving (detuning = 0)")


def _warn_large_angles(*angles):
    worst = max(float(np.max(np.abs(a))) for a in angles)
    if worst > SMALL_ANGLE_LIMIT * (1 + 1e-12):
        warnings.warn(
            f"scan reaches {math.degrees(worst):.3g} deg; equal pair weighting "
            "assumes angles of a few degrees", SmallAngleWarning, stacklevel=3)


def _transfers(phi, phi0, k_laser):
    k1, k2 = detector_wavevectors(phi, phi0, k_laser)
    return momentum_transfers(k1, k2, laser_wavevector(k_laser))


def scan(spec: ScanSpec, drive: DriveParams) -> CorrelationCurve:
    """Averaged ``g2`` of ``spec.pair`` along the grid, one value array per scheme."""
    _require_resonance(drive)
    phi, phi0, tau = spec.angles()
    _warn_large_angles(phi, phi0)
    transfers = _transfers(phi, phi0, drive.k_laser)
    values = {}
    for scheme in spec.schemes:
        values[scheme.name] = np.asarray(
            averaged_pair_correlation(spec.pair, tau, transfers, scheme, drive.gamma), dtype=float)
    return CorrelationCurve(spec, values, _metadata(drive, spec.schemes))


def tau_curve(pair: BandPair, phi: float, phi0: float, schemes: Sequence[AveragingScheme],
              drive: DriveParams, tau_grid) -> CorrelationCurve:
    spec = ScanSpec("tau", tau_grid, pair, tuple(schemes), phi=phi, phi0=phi0)
    return scan(spec, drive)


def chi_value(g_ll, g_rr, g_lr) -> float:
    if g_lr <= SINGULAR_DENOMINATOR:
        raise SingularPointError(f"cross-correlation g2_LR = {g_lr:g} is not positive")
    return g_ll * g_rr / (g_lr * g_lr)


def cauchy_schwarz_chi(phi0_grid, schemes: Sequence[AveragingScheme],
                       drive: DriveParams) -> CorrelationCurve:
    """``g_LL g_RR / g_LR^2`` at zero delay for symmetric detection (``phi = 0``).

    Grid points with a vanishing denominator come back as NaN rather than
    aborting the scan.
    """
    _require_resonance(drive)
    spec = ScanSpec("phi0", phi0_grid, BandPair.parse("LR"), tuple(schemes))
    phi, phi0, tau = spec.angles()
    _warn_large_angles(phi0)
    transfers = _transfers(phi, phi0, drive.k_laser)
    values = {}
    for scheme in spec.schemes:
        g = {label: np.asarray(averaged_pair_correlation(BandPair.parse(label), tau, transfers,
                                                         scheme, drive.gamma), dtype=float)
             for label in ("LL", "RR", "LR")}
        chi = np.full(spec.grid.shape, np.nan)
        ok = g["LR"] > SINGULAR_DENOMINATOR
        chi[ok] = g["LL"][ok] * g["RR"][ok] / g["LR"][ok] ** 2
        values[scheme.name] = chi
    return CorrelationCurve(spec, values, _metadata(drive, spec.schemes), quantity="chi")


def intensity_curve(phi_grid, schemes: Sequence[AveragingScheme], drive: DriveParams,
                    n_atoms: int) -> CorrelationCurve:
    """Weak-drive scattered intensity versus detection angle from the laser axis."""
    spec = ScanSpec("phi", phi_grid, BandPair.parse("CC"), tuple(schemes))
    k = drive.k_laser * np.stack([np.sin(spec.grid), np.zeros_like(spec.grid),
                                  np.cos(spec.grid)], axis=-1)
    q_vec = k - laser_wavevector(drive.k_laser)
    q = np.linalg.norm(q_vec, axis=-1)
    values = {}
    for scheme in spec.schemes:
        mean_cos = kernel_average(scheme, q, q_vec)
        values[scheme.name] = np.asarray(
            averaged_weak_field_intensity(drive, n_atoms, mean_cos), dtype=float)
    meta = _metadata(drive, spec.schemes)
    meta["n_atoms"] = n_atoms
    return CorrelationCurve(spec, values, meta, quantity="intensity")


@dataclass
class ScalingReport:
    n: np.ndarray
    intensities: dict   # band label -> I(N)
    g2: dict            # pair label -> normalized g2(0), N independent
    G2: dict            # pair label -> I_m I_n g2
    slopes: dict        # pair label -> d log G2 / d log N


def g2_scaling_report(n_grid, drive: DriveParams, pairs: Sequence[BandPair],
                      scheme: AveragingScheme, phi: float = 0.0,
                      phi0: float = 0.0) -> ScalingReport:
    """Unnormalized zero-delay correlation versus atom number.

    The normalized ``g2`` contains no N, so the scaling comes entirely from the
    band intensities, each linear in N.
    """
    _require_resonance(drive)
    n = np.asarray(n_grid, dtype=float)
    if n.ndim != 1 or n.size < 2 or np.any(n < 2):
        raise ValueError("N grid needs at least two values, each >= 2")
    per_n = [strong_field_intensities(drive, int(v)) for v in n]
    intensities = {b: np.array([row[i] for row in per_n]) for i, b in enumerate("CLR")}
    transfers = _transfers(phi, phi0, drive.k_laser)
    g2, G2, slopes = {}, {}, {}
    for pair in pairs:
        value = float(averaged_pair_correlation(pair, 0.0, transfers, scheme, drive.gamma))
        G = intensities[pair.first.value] * intensities[pair.second.value] * value
        g2[pair.label] = value
        G2[pair.label] = G
        slopes[pair.label] = float(np.polyfit(np.log(n), np.log(G), 1)[0])
    return ScalingReport(n, intensities, g2, G2, slopes)
