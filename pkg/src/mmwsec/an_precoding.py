"""Fully digital precoders for the noise-injection technique.

The data beam is the spatial matched filter f_s = a(theta_rx)/sqrt(N_T); the
artificial-noise beam f_n lives in the orthogonal complement of a(theta_rx)
(reached through the Householder projector B = I - a a^H / N_T) and is the
least-squares fit, over a dense direction grid, of an indicator target that
is 1 on the threat sectors and 0 elsewhere. The per-symbol transmit vector is

    f(k) = sqrt(eps) f_s + sqrt(1-eps) f_n e^{j Theta(k)},  Theta ~ U[0, 2pi).

Design grids span the full circle, as the hardware angle grids do; because a
ULA cannot distinguish theta from 2pi - theta, sector membership is evaluated
on the angle folded into [0, pi] so mirrored grid points carry consistent
targets. A one-grid-step guard band around theta_rx is always excluded from
the target.

Also here: the multisector broadcast precoder, a least-squares fit of fixed
amplitudes on receiver sectors and per-design random amplitudes elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import rng as rngmod
from .arrays import ArrayConfig, steering_matrix, steering_vector

LSTSQ_RCOND = 1e-10  # relative singular-value cutoff; Z = A^H B is rank N_T - 1
GRAM_CONDITION_LIMIT = 1e12


class DegenerateSectorsError(ValueError):
    pass


class NonOrthogonalInputsError(ValueError):
    pass


class SingularGramError(ValueError):
    pass


def direction_grid(n_directions: int) -> np.ndarray:
    """n uniformly spaced directions over the full circle [0, 2pi)."""
    return np.arange(n_directions) * (2.0 * np.pi / n_directions)


def fold_angle(theta: np.ndarray) -> np.ndarray:
    """Fold full-circle angles onto [0, pi] (a ULA pattern depends on cos only)."""
    theta = np.asarray(theta)
    return np.where(theta > np.pi, 2.0 * np.pi - theta, theta)


@dataclass(frozen=True)
class SectorSet:
    """Disjoint angle intervals [lo, hi] within [0, pi] where artificial noise
    is aimed; grid_step is the membership discretization."""

    intervals: tuple[tuple[float, float], ...]
    grid_step: float = np.radians(1.0)

    def __post_init__(self):
        ivs = tuple((float(lo), float(hi)) for lo, hi in self.intervals)
        object.__setattr__(self, "intervals", ivs)
        for lo, hi in ivs:
            if not (0.0 <= lo < hi <= np.pi):
                raise DegenerateSectorsError(f"bad interval [{lo}, {hi}]")
        for (lo1, hi1) in ivs:
            for (lo2, hi2) in ivs:
                if (lo1, hi1) < (lo2, hi2) and hi1 > lo2 and lo1 < hi2:
                    raise DegenerateSectorsError("intervals must be pairwise disjoint")
        if self.measure <= 0.0:
            raise DegenerateSectorsError("total sector measure must be positive")

    @property
    def measure(self) -> float:
        """mu(T), the total angular measure in radians."""
        return float(sum(hi - lo for lo, hi in self.intervals))

    def contains(self, theta) -> np.ndarray | bool:
        th = fold_angle(np.asarray(theta, dtype=float))
        hit = np.zeros(th.shape, dtype=bool)
        for lo, hi in self.intervals:
            hit |= (th >= lo) & (th <= hi)
        return hit if hit.shape else bool(hit)

    @classmethod
    def omni_excluding(cls, theta_rx: float, guard: float = np.radians(1.0)) -> "SectorSet":
        """All of [0, pi] except a guard band around the receiver direction."""
        ivs = []
        if theta_rx - guard > 0.0:
            ivs.append((0.0, theta_rx - guard))
        if theta_rx + guard < np.pi:
            ivs.append((theta_rx + guard, np.pi))
        return cls(intervals=tuple(ivs))

    @classmethod
    def around(cls, theta_rx: float, half_width: float, guard: float = np.radians(1.0)) -> "SectorSet":
        """half_width to each side of the receiver, excluding the guard band."""
        lo = max(0.0, theta_rx - half_width)
        hi = min(np.pi, theta_rx + half_width)
        return cls(intervals=((lo, theta_rx - guard), (theta_rx + guard, hi)))


def matched_filter(cfg: ArrayConfig, theta_rx: float) -> np.ndarray:
    """f_s = a(theta_rx)/sqrt(N_T); |a(theta_rx)^H f_s|^2 = N_T."""
    return steering_vector(cfg, theta_rx) / np.sqrt(cfg.n_antennas)


def householder_complement(cfg: ArrayConfig, theta_rx: float) -> np.ndarray:
    """B = I - a(theta_rx) a(theta_rx)^H / N_T: Hermitian projector of rank
    N_T - 1 annihilating the receiver steering vector."""
    a = steering_vector(cfg, theta_rx)
    return np.eye(cfg.n_antennas) - np.outer(a, a.conj()) / cfg.n_antennas


@dataclass(frozen=True)
class NoiseBeamDesign:
    weights: np.ndarray
    residual_rms: float      # RMS of Z x - q over the design grid
    n_directions: int


def design_noise_beam(
    cfg: ArrayConfig, theta_rx: float, sectors: SectorSet, n_directions: int = 360
) -> NoiseBeamDesign:
    """Least-squares sector beam in the orthogonal complement of a(theta_rx).

    Solves A^H B x ~ q for the indicator target q of the sectors on the
    direction grid, then f_n = B x normalized. (Z^H Z is singular by the
    projector structure, so the solve is SVD-based with a relative cutoff.)
    """
    if n_directions <= cfg.n_antennas:
        raise DegenerateSectorsError(
            f"need more grid directions than antennas, got {n_directions} <= {cfg.n_antennas}"
        )
    grid = direction_grid(n_directions)
    folded = fold_angle(grid)
    target = sectors.contains(grid)
    target &= np.abs(folded - theta_rx) >= (2.0 * np.pi / n_directions)  # receiver guard
    if not target.any():
        raise DegenerateSectorsError("no grid direction falls inside the sectors")

    a_mat = steering_matrix(cfg, grid)
    z = a_mat.conj().T @ householder_complement(cfg, theta_rx)
    q = target.astype(float)
    x, *_ = np.linalg.lstsq(z, q, rcond=LSTSQ_RCOND)
    raw = householder_complement(cfg, theta_rx) @ x
    weights = raw / np.linalg.norm(raw)
    residual = np.linalg.norm(z @ x - q) / np.sqrt(n_directions)
    return NoiseBeamDesign(weights=weights, residual_rms=float(residual), n_directions=n_directions)


def noise_beam(
    cfg: ArrayConfig, theta_rx: float, sectors: SectorSet, n_directions: int = 360
) -> np.ndarray:
    return design_noise_beam(cfg, theta_rx, sectors, n_directions).weights


def combined_precoder(
    f_s: np.ndarray, f_n: np.ndarray, epsilon: float, k: int, seed: int
) -> np.ndarray:
    """Per-symbol precoder sqrt(eps) f_s + sqrt(1-eps) f_n e^{j Theta(k)} with
    Theta(k) from the seeded per-symbol stream; unit norm by orthogonality."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
    if abs(np.vdot(f_s, f_n)) > 1e-8:
        raise NonOrthogonalInputsError("f_s and f_n are not orthogonal")
    theta_k = rngmod.stream(seed, rngmod.NOISE_PHASE, k).uniform(0.0, 2.0 * np.pi)
    return np.sqrt(epsilon) * f_s + np.sqrt(1.0 - epsilon) * f_n * np.exp(1j * theta_k)


@dataclass(frozen=True)
class CombinedPrecoder:
    """Data beam, noise beam, power split and the per-symbol phase seed."""

    f_s: np.ndarray
    f_n: np.ndarray
    epsilon: float
    noise_phase_seed: int = 0

    def __post_init__(self):
        if abs(np.vdot(self.f_s, self.f_n)) > 1e-8:
            raise NonOrthogonalInputsError("f_s and f_n are not orthogonal")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must be in [0, 1], got {self.epsilon}")

    def symbol(self, k: int) -> np.ndarray:
        return combined_precoder(self.f_s, self.f_n, self.epsilon, k, self.noise_phase_seed)


def measured_c0(
    cfg: ArrayConfig, f_n: np.ndarray, sectors: SectorSet, n_directions: int = 360
) -> float:
    """Beam-imperfection constant: mean in-sector AN gain times mu(T)/pi.

    The ideal-sector model puts |a^H f_n|^2 = pi/mu(T); the measured constant
    rescales it to the designed beam's average. Values above 1 occur for
    sectors touching endfire, where a ULA concentrates more than the
    uniform-measure share.
    """
    grid = direction_grid(n_directions)
    mask = np.asarray(sectors.contains(grid))
    if not mask.any():
        raise DegenerateSectorsError("no grid direction falls inside the sectors")
    pattern = np.abs(steering_matrix(cfg, grid).conj().T @ f_n) ** 2
    return float(pattern[mask].mean() * sectors.measure / np.pi)


@dataclass(frozen=True)
class MultisectorSector:
    """One broadcast sector: fixed amplitude sqrt(power_fraction) when it holds
    a receiver, zero-mean random amplitude x*sqrt(power_fraction) otherwise."""

    lo: float
    hi: float
    power_fraction: float
    receiver: bool


@dataclass(frozen=True)
class MultisectorDesign:
    weights: np.ndarray
    residual_norm: float                 # projection error of the raw LS fit
    amplitudes: tuple[float, ...]        # per-sector target amplitude this draw


def multisector_precoder(
    cfg: ArrayConfig,
    sectors: Sequence[MultisectorSector],
    rng: np.random.Generator,
    n_directions: int = 360,
) -> MultisectorDesign:
    """Draft-style broadcast precoder f = C (A A^H)^{-1} A g.

    g holds sqrt(alpha_r) on receiver sectors, x*sqrt(alpha_l) with
    x ~ N(0, 1) drawn per design on the remaining sectors, 0 elsewhere; the
    power fractions must sum to 1. Raises SingularGramError when cond(A A^H)
    exceeds 1e12 (densify the grid).
    """
    total = sum(s.power_fraction for s in sectors)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"sector power fractions must sum to 1, got {total}")
    ss = SectorSet(intervals=tuple((s.lo, s.hi) for s in sectors))  # validates disjointness

    grid = direction_grid(n_directions)
    folded = fold_angle(grid)
    g = np.zeros(n_directions)
    amplitudes = []
    for s in sectors:
        amp = np.sqrt(s.power_fraction)
        if not s.receiver:
            amp *= rng.standard_normal()
        amplitudes.append(float(amp))
        g[(folded >= s.lo) & (folded <= s.hi)] = amp

    a_mat = steering_matrix(cfg, grid)
    gram = a_mat @ a_mat.conj().T
    if np.linalg.cond(gram) > GRAM_CONDITION_LIMIT:
        raise SingularGramError(
            f"A A^H condition number exceeds {GRAM_CONDITION_LIMIT:g}; "
            f"densify the direction grid (n_directions={n_directions})"
        )
    raw = np.linalg.solve(gram, a_mat @ g)
    residual = float(np.linalg.norm(a_mat.conj().T @ raw - g))
    return MultisectorDesign(
        weights=raw / np.linalg.norm(raw),
        residual_norm=residual,
        amplitudes=tuple(amplitudes),
    )
