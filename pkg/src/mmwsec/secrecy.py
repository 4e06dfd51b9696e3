"""Closed-form SNRs, secrecy rates and the design bounds for both techniques.

Rates are [log2(1+snr_rx) - log2(1+snr_ev)]^+ bits per channel use. The
asymptotic eavesdropper SNR (antenna count -> infinity) upper-bounds the
finite one whenever the eavesdropper noise is positive, so the bound built
from it lower-bounds the rate. All stored values are linear; convert to dB at
presentation only. The analytic formulas take |g_E|^2 = 1 (fixed-gain
interpretation); the Monte Carlo draws gains per the Scenario.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .an_precoding import SectorSet, measured_c0
from .arrays import ArrayConfig, Scenario, pattern_gain_sq
from .subset_jam import beta_stats_closed_form, validate_subset_size

RECEIVER_ANGLE_TOL = 1e-12


class ReceiverAngleError(ValueError):
    pass


@dataclass(frozen=True)
class SecrecyPoint:
    snr_rx: float
    snr_ev: float
    snr_ev_asymptotic: float
    rate: float
    rate_lower_bound: float


def clamped_rate(snr_rx: float, snr_ev: float) -> float:
    """[log2(1+snr_rx) - log2(1+snr_ev)]^+."""
    return float(max(np.log2(1.0 + snr_rx) - np.log2(1.0 + snr_ev), 0.0))


def _check_not_receiver_angle(theta: float, theta_rx: float) -> None:
    if abs(np.cos(theta) - np.cos(theta_rx)) < RECEIVER_ANGLE_TOL:
        raise ReceiverAngleError(
            "theta coincides with the receiver direction; the eavesdropper "
            "formulas hold only away from theta_rx"
        )


# ---------------------------------------------------------------------------
# analog (randomized-subset) technique


def analog_snr_rx(scn: Scenario, cfg: ArrayConfig, m: int) -> float:
    """gamma_R = P alpha N_R |g|^2 M^2 / (N_T sigma^2)."""
    validate_subset_size(cfg, m)
    return (
        scn.tx_power
        * scn.path_loss_rx
        * scn.n_rx_antennas
        * abs(scn.rx_gain) ** 2
        * m**2
        / (cfg.n_antennas * scn.noise_rx)
    )


def analog_snr_ev(
    scn: Scenario, cfg: ArrayConfig, m: int, theta: float
) -> tuple[float, float]:
    """Eavesdropper SNR at theta != theta_rx: (finite-N_E value, asymptotic limit).

    finite:     A |E beta|^2 / (A var[beta] + sigma_E^2), A = P alpha_E N_E
    asymptotic: |E beta|^2 / var[beta]
                = M^2 u(theta) / (N_T (N_T^2 - M^2)), infinite when M = N_T.
    """
    _check_not_receiver_angle(theta, scn.theta_rx)
    stats = beta_stats_closed_form(cfg, m, theta, scn.theta_rx)
    mean_sq = abs(stats.mean) ** 2
    a_pow = scn.tx_power * scn.path_loss_ev * scn.n_ev_antennas  # |g_E|^2 = 1
    finite = a_pow * mean_sq / (a_pow * stats.variance + scn.noise_ev)
    asymptotic = mean_sq / stats.variance if stats.variance > 0.0 else np.inf
    return float(finite), float(asymptotic)


def analog_secrecy_bound(scn: Scenario, cfg: ArrayConfig, m: int, theta: float) -> SecrecyPoint:
    """Rate from the finite eavesdropper SNR; lower bound from the asymptotic one."""
    snr_rx = analog_snr_rx(scn, cfg, m)
    snr_ev, snr_ev_bar = analog_snr_ev(scn, cfg, m, theta)
    return SecrecyPoint(
        snr_rx=snr_rx,
        snr_ev=snr_ev,
        snr_ev_asymptotic=snr_ev_bar,
        rate=clamped_rate(snr_rx, snr_ev),
        rate_lower_bound=clamped_rate(snr_rx, snr_ev_bar) if np.isfinite(snr_ev_bar) else 0.0,
    )


def analog_subset_bound(scn: Scenario, cfg: ArrayConfig, theta: float) -> float:
    """Largest subset size keeping gamma_R above the asymptotic eavesdropper
    SNR: M < sqrt(N_T^2 - u(theta)/rho), rho = P alpha N_R / sigma^2.
    Returns 0 when no M is feasible."""
    rho = (
        scn.tx_power * scn.path_loss_rx * scn.n_rx_antennas * abs(scn.rx_gain) ** 2 / scn.noise_rx
    )
    u = pattern_gain_sq(cfg, theta, scn.theta_rx)
    inside = cfg.n_antennas**2 - u / rho
    return float(np.sqrt(inside)) if inside > 0.0 else 0.0


# ---------------------------------------------------------------------------
# hybrid (sector-confined noise-injection) technique


class HybridEvSnr(NamedTuple):
    finite: float
    asymptotic: float
    in_sector: bool


def hybrid_snr_rx(scn: Scenario, cfg: ArrayConfig, epsilon: float) -> float:
    """gamma_R = P alpha eps N_R N_T |g|^2 / sigma^2; the noise beam is
    invisible at the receiver."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
    return (
        scn.tx_power
        * scn.path_loss_rx
        * epsilon
        * scn.n_rx_antennas
        * cfg.n_antennas
        * abs(scn.rx_gain) ** 2
        / scn.noise_rx
    )


def _an_gain(
    cfg: ArrayConfig,
    theta: float,
    theta_rx: float,
    sectors: SectorSet,
    c0: float,
    f_n: np.ndarray | None,
) -> tuple[float, bool]:
    """|a(theta)^H f_n|^2: the designed beam's actual value when f_n is given,
    otherwise the ideal-sector model pi*c0/mu(T) (in-sector only)."""
    in_sector = bool(sectors.contains(theta))
    if f_n is not None:
        from .subset_jam import pattern_value

        return abs(pattern_value(cfg, f_n, theta)) ** 2, in_sector
    if not in_sector:
        raise ValueError(
            "theta lies outside the injection sectors; the pi*c0/mu(T) model "
            "does not apply there, pass the designed f_n instead"
        )
    return np.pi * c0 / sectors.measure, in_sector


def hybrid_snr_ev(
    scn: Scenario,
    cfg: ArrayConfig,
    epsilon: float,
    theta: float,
    sectors: SectorSet,
    c0: float = 1.0,
    f_n: np.ndarray | None = None,
) -> HybridEvSnr:
    """Eavesdropper SNR under noise injection: (finite, asymptotic, in_sector).

    finite:     A eps |a^H f_s|^2 / (A (1-eps) |a^H f_n|^2 + sigma_E^2)
    asymptotic: eps |a^H f_s|^2 / ((1-eps) |a^H f_n|^2)

    |a^H f_s|^2 = u(theta)/N_T in closed form. The AN gain |a^H f_n|^2 comes
    from the designed beam when f_n is given (valid at any theta, and the form
    the simulation bound uses); otherwise from the in-sector model pi*c0/mu(T).
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
    _check_not_receiver_angle(theta, scn.theta_rx)
    signal_gain = pattern_gain_sq(cfg, theta, scn.theta_rx) / cfg.n_antennas
    an_gain, in_sector = _an_gain(cfg, theta, scn.theta_rx, sectors, c0, f_n)
    a_pow = scn.tx_power * scn.path_loss_ev * scn.n_ev_antennas  # |g_E|^2 = 1
    finite = (
        a_pow * epsilon * signal_gain / (a_pow * (1.0 - epsilon) * an_gain + scn.noise_ev)
    )
    if epsilon >= 1.0:
        asymptotic = np.inf if signal_gain > 0.0 else 0.0
    else:
        asymptotic = epsilon * signal_gain / ((1.0 - epsilon) * an_gain)
    return HybridEvSnr(finite=float(finite), asymptotic=float(asymptotic), in_sector=in_sector)


def hybrid_secrecy_bound(
    scn: Scenario,
    cfg: ArrayConfig,
    epsilon: float,
    theta: float,
    sectors: SectorSet,
    c0: float = 1.0,
    f_n: np.ndarray | None = None,
) -> SecrecyPoint:
    snr_rx = hybrid_snr_rx(scn, cfg, epsilon)
    ev = hybrid_snr_ev(scn, cfg, epsilon, theta, sectors, c0, f_n)
    return SecrecyPoint(
        snr_rx=snr_rx,
        snr_ev=ev.finite,
        snr_ev_asymptotic=ev.asymptotic,
        rate=clamped_rate(snr_rx, ev.finite),
        rate_lower_bound=clamped_rate(snr_rx, ev.asymptotic) if np.isfinite(ev.asymptotic) else 0.0,
    )


def hybrid_epsilon_bound(
    scn: Scenario, cfg: ArrayConfig, theta: float, sectors: SectorSet, c0: float
) -> float:
    """Largest data-power fraction keeping gamma_R above the asymptotic
    eavesdropper SNR: eps < 1 - nu(theta) mu(T) / (zeta pi c0), clamped to
    [0, 1]; zeta = P alpha N_T N_R / sigma^2, nu = u/N_T."""
    if c0 <= 0.0:
        raise ValueError(f"c0 must be positive, got {c0}")
    zeta = (
        scn.tx_power
        * scn.path_loss_rx
        * cfg.n_antennas
        * scn.n_rx_antennas
        * abs(scn.rx_gain) ** 2
        / scn.noise_rx
    )
    nu = pattern_gain_sq(cfg, theta, scn.theta_rx) / cfg.n_antennas
    bound = 1.0 - nu * sectors.measure / (zeta * np.pi * c0)
    return float(min(max(bound, 0.0), 1.0))


def calibrated_c0(
    scn: Scenario, cfg: ArrayConfig, sectors: SectorSet, n_directions: int = 360
) -> float:
    """Design the noise beam for this scenario's receiver angle and measure c0."""
    from .an_precoding import noise_beam

    f_n = noise_beam(cfg, scn.theta_rx, sectors, n_directions)
    return measured_c0(cfg, f_n, sectors, n_directions)
