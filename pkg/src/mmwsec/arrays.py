"""ULA geometry, steering vectors, and the link-budget quantities.

Angle convention: theta is measured from the array axis, in radians, on
[0, pi]. All external interfaces (CLI, file formats) use degrees; conversion
happens at that boundary only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0
BOLTZMANN = 1.380_649e-23

# below this, |sin(pi*(d/lambda)*delta)| is treated as a removable singularity
SIN_SINGULARITY = 1e-12


class InvalidAngleError(ValueError):
    pass


class InvalidGeometryError(ValueError):
    pass


@dataclass(frozen=True)
class ArrayConfig:
    """Transmit ULA: element count, spacing, RF chains, phase-shifter bits,
    and the on/off switch-group size used by the hybrid dictionary."""

    n_antennas: int
    spacing_ratio: float = 0.5  # d / lambda
    n_rf: int = 1
    phase_bits: int = 6
    group_size: int | None = None  # None: one group spanning the array

    def __post_init__(self):
        if self.n_antennas < 2:
            raise ValueError(f"n_antennas must be >= 2, got {self.n_antennas}")
        if not 0.0 < self.spacing_ratio <= 0.5:
            raise ValueError(f"spacing_ratio must be in (0, 0.5], got {self.spacing_ratio}")
        if not 1 <= self.n_rf <= self.n_antennas:
            raise ValueError(f"n_rf must be in [1, n_antennas], got {self.n_rf}")
        if self.phase_bits < 1:
            raise ValueError(f"phase_bits must be >= 1, got {self.phase_bits}")
        if self.group_size is None:
            object.__setattr__(self, "group_size", self.n_antennas)
        if self.n_antennas % self.group_size != 0:
            raise ValueError(
                f"group_size {self.group_size} does not divide n_antennas {self.n_antennas}"
            )

    @property
    def n_groups(self) -> int:
        return self.n_antennas // self.group_size


def element_phases(cfg: ArrayConfig, cos_theta: float) -> np.ndarray:
    """Per-antenna phase progression ((N-1)/2 - n) * 2*pi*(d/lambda) * cos(theta)."""
    n = np.arange(cfg.n_antennas)
    return ((cfg.n_antennas - 1) / 2.0 - n) * 2.0 * np.pi * cfg.spacing_ratio * cos_theta


def steering_vector(cfg: ArrayConfig, theta: float) -> np.ndarray:
    """Array response a(theta); unit-modulus entries, squared norm N_T."""
    if not 0.0 <= theta <= np.pi:
        raise InvalidAngleError(f"theta must be in [0, pi], got {theta}")
    return np.exp(1j * element_phases(cfg, np.cos(theta)))


def steering_matrix(cfg: ArrayConfig, thetas: np.ndarray) -> np.ndarray:
    """Columns a(theta) for a vector of angles (no range check; design grids
    span the full circle, where cos already folds mirrored angles)."""
    n = np.arange(cfg.n_antennas)[:, None]
    coef = (cfg.n_antennas - 1) / 2.0 - n
    return np.exp(1j * coef * 2.0 * np.pi * cfg.spacing_ratio * np.cos(np.asarray(thetas))[None, :])


def dirichlet_ratio(n_antennas: int, spacing_ratio: float, delta: float) -> float:
    """sin(N*pi*(d/lambda)*delta) / sin(pi*(d/lambda)*delta), the coherent sum
    of N unit phasors with progressive phase. Removable singularities return
    the analytic limit N*cos(N*x)/cos(x)."""
    x = np.pi * spacing_ratio * delta
    s = np.sin(x)
    if abs(s) < SIN_SINGULARITY:
        return float(n_antennas * np.cos(n_antennas * x) / np.cos(x))
    return float(np.sin(n_antennas * x) / s)


def pattern_gain_sq(cfg: ArrayConfig, theta: float, theta_rx: float) -> float:
    """u(theta): squared Dirichlet ratio at delta = cos(theta) - cos(theta_rx)."""
    delta = np.cos(theta) - np.cos(theta_rx)
    return dirichlet_ratio(cfg.n_antennas, cfg.spacing_ratio, delta) ** 2


@dataclass(frozen=True)
class TwoRayGain:
    """Direct-plus-road-reflection gain: |1 - e^{j*omega}|^2 = 4 sin^2(omega/2)."""

    tx_height: float
    rx_height: float
    distance: float
    wavelength: float
    phase_offset: float
    gain_factor: float


def two_ray_gain(h_t: float, h_r: float, distance: float, wavelength: float) -> TwoRayGain:
    for name, v in (("h_t", h_t), ("h_r", h_r), ("distance", distance), ("wavelength", wavelength)):
        if v <= 0:
            raise InvalidGeometryError(f"{name} must be positive, got {v}")
    omega = (2.0 * np.pi / wavelength) * (2.0 * h_t * h_r / distance)
    return TwoRayGain(
        tx_height=h_t,
        rx_height=h_r,
        distance=distance,
        wavelength=wavelength,
        phase_offset=omega,
        gain_factor=float(4.0 * np.sin(omega / 2.0) ** 2),
    )


def free_space_path_loss(distance: float, wavelength: float) -> float:
    """(lambda / (4*pi*D))^2, the exponent-2 loss used as the default alpha."""
    if distance <= 0 or wavelength <= 0:
        raise InvalidGeometryError(
            f"distance and wavelength must be positive, got {distance}, {wavelength}"
        )
    return float((wavelength / (4.0 * np.pi * distance)) ** 2)


def thermal_noise_power(
    bandwidth_hz: float = 50e6, temperature_k: float = 290.0, noise_figure_db: float = 0.0
) -> float:
    """k_B * T * B scaled by the noise figure; the default noise floor."""
    return BOLTZMANN * temperature_k * bandwidth_hz * 10.0 ** (noise_figure_db / 10.0)


@dataclass(frozen=True)
class Scenario:
    """Powers, losses, noise levels and receiver/eavesdropper parameters that
    drive the SNR and secrecy-rate evaluation. All stored values are linear."""

    tx_power: float                 # watts
    path_loss_rx: float             # alpha
    path_loss_ev: float             # alpha_E
    noise_rx: float                 # sigma^2, watts
    noise_ev: float                 # sigma_E^2, watts
    n_rx_antennas: int              # N_R
    n_ev_antennas: int              # N_E
    theta_rx: float                 # radians
    rx_gain: complex = 1.0 + 0.0j   # g
    ev_gain: complex = 1.0 + 0.0j   # g_E when ev_gain_model == "fixed"
    ev_gain_model: str = "fixed"    # "fixed" | "gaussian" (CN(0,1) draws in MC)

    def __post_init__(self):
        for name in ("tx_power", "noise_rx", "noise_ev"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("path_loss_rx", "path_loss_ev"):
            if not 0.0 < getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be in (0, 1]")
        if self.n_rx_antennas < 1 or self.n_ev_antennas < 1:
            raise ValueError("antenna counts must be positive")
        if not 0.0 < self.theta_rx < np.pi:
            raise ValueError(f"theta_rx must be in (0, pi), got {self.theta_rx}")
        if self.ev_gain_model not in ("fixed", "gaussian"):
            raise ValueError(f"unknown ev_gain_model {self.ev_gain_model!r}")


def vehicular_scenario(
    tx_power_dbm: float = 37.0,
    frequency_hz: float = 60e9,
    bandwidth_hz: float = 50e6,
    rx_distance: float = 50.0,
    ev_distance: float = 10.0,
    n_rx_antennas: int = 16,
    n_ev_antennas: int = 500,
    theta_rx: float = np.radians(120.0),
    ev_gain_model: str = "gaussian",
    noise_figure_db: float = 0.0,
    two_ray_heights: tuple[float, float] | None = None,
) -> Scenario:
    """60 GHz vehicle-to-vehicle defaults: 37 dBm over 50 MHz, exponent-2 loss
    at 50 m (receiver) and 10 m (eavesdropper), N_R=16, N_E=500, g_E ~ CN(0,1).

    When two_ray_heights=(h_t, h_r) is given, the receiver path loss is
    multiplied by the two-ray gain factor at rx_distance.
    """
    wavelength = SPEED_OF_LIGHT / frequency_hz
    alpha = free_space_path_loss(rx_distance, wavelength)
    if two_ray_heights is not None:
        h_t, h_r = two_ray_heights
        alpha *= two_ray_gain(h_t, h_r, rx_distance, wavelength).gain_factor
    noise = thermal_noise_power(bandwidth_hz, noise_figure_db=noise_figure_db)
    return Scenario(
        tx_power=10.0 ** ((tx_power_dbm - 30.0) / 10.0),
        path_loss_rx=alpha,
        path_loss_ev=free_space_path_loss(ev_distance, wavelength),
        noise_rx=noise,
        noise_ev=noise,
        n_rx_antennas=n_rx_antennas,
        n_ev_antennas=n_ev_antennas,
        theta_rx=theta_rx,
        ev_gain_model=ev_gain_model,
    )
