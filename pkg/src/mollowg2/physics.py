"""Per-pair physics of a strongly driven two-level ensemble.

Units throughout: the decay rate gamma sets the frequency/time scale and the
laser wavelength sets the length scale, so ``K_LASER = 2*pi``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

K_LASER = 2.0 * math.pi
STRONG_DRIVE_RATIO = 10.0


class DegenerateDressingError(ValueError):
    """Raised when the dressed-state mixing angle is undefined (no drive)."""


class ElasticityError(ValueError):
    """Raised when scattered and laser wave vectors differ in magnitude."""


class UnsupportedConfigurationError(ValueError):
    pass


class StrongDrivingWarning(UserWarning):
    pass


class WeakFieldWarning(UserWarning):
    pass


@dataclass(frozen=True)
class DriveParams:
    rabi_half: float = 10.0
    detuning: float = 0.0
    gamma: float = 1.0
    k_laser: float = K_LASER

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if not self.rabi_half >= 0:
            raise ValueError(f"rabi_half must be non-negative, got {self.rabi_half}")
        if not self.k_laser > 0:
            raise ValueError(f"k_laser must be positive, got {self.k_laser}")

    @property
    def omega_tilde(self) -> float:
        return math.hypot(self.rabi_half, 0.5 * self.detuning)

    @property
    def strongly_driven(self) -> bool:
        return self.omega_tilde >= STRONG_DRIVE_RATIO * self.gamma

    @property
    def on_resonance(self) -> bool:
        return self.detuning == 0.0


@dataclass(frozen=True)
class DressedParams:
    omega_tilde: float
    theta: float
    omega_plus: float
    omega_minus: float


def dressed_params(drive: DriveParams, warn: bool = True) -> DressedParams:
    """Generalized Rabi frequency, mixing angle and Mollow sideband offsets.

    ``theta`` solves ``cot(2 theta) = detuning / (2 rabi_half)`` on (0, pi/2).
    Sideband frequencies are returned as offsets from the laser frequency.
    """
    if drive.rabi_half == 0.0:
        raise DegenerateDressingError(
            "rabi_half = 0: the dressed-state mixing angle is undefined "
            "and the spectral band picture does not apply")
    omega_tilde = drive.omega_tilde
    theta = 0.5 * math.atan2(2.0 * drive.rabi_half, drive.detuning)
    if warn and not drive.strongly_driven:
        warnings.warn(
            f"generalized Rabi frequency {omega_tilde:g} < "
            f"{STRONG_DRIVE_RATIO:g} gamma; spectral lines are not well resolved",
            StrongDrivingWarning, stacklevel=2)
    return DressedParams(omega_tilde, theta, 2.0 * omega_tilde, -2.0 * omega_tilde)


class Band(enum.Enum):
    C = "C"
    L = "L"
    R = "R"


class BandPair(NamedTuple):
    first: Band
    second: Band

    @classmethod
    def parse(cls, text: str) -> "BandPair":
        text = text.strip().upper()
        if len(text) != 2 or any(c not in "CLR" for c in text):
            raise ValueError(f"invalid band pair {text!r}; expected two of C, L, R")
        return cls(Band(text[0]), Band(text[1]))

    @property
    def label(self) -> str:
        return self.first.value + self.second.value

    def __str__(self):
        return self.label


ALL_PAIRS = tuple(BandPair.parse(p) for p in
                  ("CC", "LL", "RR", "LR", "RL", "CL", "CR", "LC", "RC"))


@dataclass(frozen=True)
class Geometry:
    """Detector directions: bisector angle ``phi`` and opening angle ``phi0`` (radians)."""

    phi: float = 0.0
    phi0: float = 0.0

    def __post_init__(self):
        if abs(self.phi) > math.pi or abs(self.phi0) > math.pi:
            raise ValueError(f"angles must lie in [-pi, pi], got phi={self.phi}, phi0={self.phi0}")


def _direction(polar):
    polar = np.asarray(polar, dtype=float)
    return np.stack([np.sin(polar), np.zeros_like(polar), np.cos(polar)], axis=-1)


def laser_wavevector(k_laser: float = K_LASER) -> np.ndarray:
    return np.array([0.0, 0.0, k_laser])


def detector_wavevectors(phi, phi0, k_laser: float = K_LASER):
    """Wave vectors of the two detected photons in the x-z plane.

    The laser runs along z. ``k1`` sits at polar angle ``phi + phi0/2`` and
    ``k2`` at ``phi - phi0/2``. Array inputs broadcast; a trailing axis of
    length 3 is appended.
    """
    if isinstance(phi, Geometry):
        phi, phi0 = phi.phi, phi.phi0
    phi = np.asarray(phi, dtype=float)
    phi0 = np.asarray(phi0, dtype=float)
    half = 0.5 * phi0
    return k_laser * _direction(phi + half), k_laser * _direction(phi - half)


@dataclass(frozen=True)
class MomentumTransfers:
    q_plus: np.ndarray
    q_minus: np.ndarray
    q1: np.ndarray
    q2: np.ndarray
    # full vectors k1 + k2 - 2 kL and k1 - k2, needed by explicit-cloud averages
    plus_vector: np.ndarray
    minus_vector: np.ndarray


def momentum_transfers(k1, k2, k_l, rtol: float = 1e-12) -> MomentumTransfers:
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    k_l = np.asarray(k_l, dtype=float)
    k_mag = np.linalg.norm(k_l, axis=-1)
    for name, k in (("k1", k1), ("k2", k2)):
        if not np.allclose(np.linalg.norm(k, axis=-1), k_mag, rtol=rtol, atol=0.0):
            raise ElasticityError(f"|{name}| differs from |k_L| by more than {rtol:g} relative")
    d1 = k1 - k_l
    d2 = k2 - k_l
    plus = d1 + d2
    minus = k1 - k2
    return MomentumTransfers(
        q_plus=np.linalg.norm(plus, axis=-1),
        q_minus=np.linalg.norm(minus, axis=-1),
        q1=np.linalg.norm(d1, axis=-1),
        q2=np.linalg.norm(d2, axis=-1),
        plus_vector=plus,
        minus_vector=minus,
    )


def geometry_transfers(geom: Geometry, k_laser: float = K_LASER) -> MomentumTransfers:
    k1, k2 = detector_wavevectors(geom.phi, geom.phi0, k_laser)
    return momentum_transfers(k1, k2, laser_wavevector(k_laser))


@dataclass(frozen=True)
class PairPhases:
    delta1: float
    delta2: float

    @property
    def delta_plus(self):
        return self.delta1 + self.delta2

    @property
    def delta_minus(self):
        return self.delta1 - self.delta2


def pair_phases(q1_vector, q2_vector, r_ji) -> PairPhases:
    """Phases ``(k_s - k_L) . r_ji`` for the two detected photons."""
    r_ji = np.asarray(r_ji, dtype=float)
    return PairPhases(float(np.dot(q1_vector, r_ji)), float(np.dot(q2_vector, r_ji)))


def _pair_kind(pair: BandPair) -> str:
    a, b = pair
    if a is Band.C and b is Band.C:
        return "central"
    if Band.C in pair:
        return "mixed"
    return "same" if a is b else "cross"


def envelope_rate(pair: BandPair, gamma: float = 1.0) -> float:
    """Decay rate of ``g2(tau) - 1``; zero for the uncorrelated C-sideband pairs."""
    kind = _pair_kind(pair)
    if kind == "central":
        return 2.0 * gamma
    if kind == "mixed":
        return 0.0
    return 3.0 * gamma


def g2_from_cosines(pair: BandPair, tau, cos_plus, cos_minus, gamma: float = 1.0):
    """Band correlation with the phase cosines (or their averages) supplied.

    Shared by the single-pair formula and every configuration average, since
    averaging acts only on ``cos(delta_plus)`` and ``cos(delta_minus)``.
    """
    kind = _pair_kind(pair)
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("tau must be non-negative")
    if kind == "mixed":
        return np.ones(np.broadcast(tau, cos_plus, cos_minus).shape)[()]
    envelope = np.exp(-envelope_rate(pair, gamma) * tau)
    if kind == "central":
        return 1.0 + (cos_plus + cos_minus) * envelope
    if kind == "same":
        return 1.0 + cos_minus * envelope
    return 1.0 + cos_plus * envelope


def pair_g2(pair: BandPair, tau: float, phases: PairPhases, gamma: float = 1.0) -> float:
    return float(g2_from_cosines(pair, tau, math.cos(phases.delta_plus),
                                 math.cos(phases.delta_minus), gamma))


def spin_expectations(drive: DriveParams):
    """Weak-field single-atom steady state: ``<S_z>`` and complex ``<S+>``."""
    g2d2 = drive.gamma ** 2 + drive.detuning ** 2
    denom = g2d2 + drive.rabi_half ** 2
    s_z = -g2d2 / (2.0 * denom)
    s_plus = 1j * drive.rabi_half * g2d2 / ((drive.gamma - 1j * drive.detuning) * denom)
    return s_z, s_plus


def _weak_field(drive: DriveParams, n_atoms: int, cos_term):
    if n_atoms < 1:
        raise ValueError(f"need at least one atom, got N={n_atoms}")
    if drive.rabi_half >= drive.gamma:
        warnings.warn("weak-field intensity formula assumes rabi_half < gamma",
                      WeakFieldWarning, stacklevel=3)
    s_z, s_plus = spin_expectations(drive)
    return n_atoms * (0.5 + s_z) + n_atoms * (n_atoms - 1) * abs(s_plus) ** 2 * cos_term


def weak_field_intensity(drive: DriveParams, q_vector, r_ji, n_atoms: int) -> float:
    """Directional weak-drive intensity for a single separation vector, units of Psi_R."""
    phase = float(np.dot(np.asarray(q_vector, dtype=float), np.asarray(r_ji, dtype=float)))
    return float(_weak_field(drive, n_atoms, math.cos(phase)))


def averaged_weak_field_intensity(drive: DriveParams, n_atoms: int, mean_cos):
    """Same as :func:`weak_field_intensity` with the cosine replaced by a configuration average."""
    return _weak_field(drive, n_atoms, np.asarray(mean_cos, dtype=float))


def strong_field_intensities(drive: DriveParams, n_atoms: int, populations=None):
    """Relative band intensities ``(I_C, I_L, I_R)`` under strong driving.

    Only the i = j terms survive once cross-atom correlators factorize and the
    dressed coherences are dropped, so every band scales linearly with N.
    ``populations`` are the dressed-state populations ``(p1, p2)``; they
    default to 1/2 each, which is only justified on resonance.
    """
    if n_atoms < 1:
        raise ValueError(f"need at least one atom, got N={n_atoms}")
    theta = dressed_params(drive).theta
    if populations is None:
        if not drive.on_resonance:
            raise UnsupportedConfigurationError(
                "default dressed populations are only valid on resonance; "
                "pass populations explicitly for detuned driving")
        populations = (0.5, 0.5)
    p1, p2 = populations
    i_c = 0.25 * math.sin(2.0 * theta) ** 2
    i_l = math.sin(theta) ** 4 * p1
    i_r = math.cos(theta) ** 4 * p2
    return n_atoms * i_c, n_atoms * i_l, n_atoms * i_r
