"""Randomized-subset analog beamforming with artificial noise.

Per symbol, a random subset I_M of M antennas (plus the even half E_L of the
remaining antennas) carries the beam-steering phase toward the receiver while
the odd half O_L carries that phase plus pi. The receiver sees the constant
gain M/sqrt(N_T); everywhere else the far-field gain

    beta = (1/sqrt(N_T)) * sum_n W_n * exp(j*((N_T-1)/2 - n)*2*pi*(d/lambda)*delta),
    W_n = +1 on I_M u E_L, -1 on O_L,    delta = cos(theta) - cos(theta_rx)

is randomized across symbols. The closed-form statistics model the signs W_n
as IID Bernoulli (+1 w.p. (N_T+M)/2N_T); the fixed-count partition deviates
from that model by an O(1/N_T) variance correction, quantified exactly by
:func:`partition_beta_variance`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import ArrayConfig, SIN_SINGULARITY, element_phases, steering_vector


class InvalidSubsetSizeError(ValueError):
    pass


@dataclass(frozen=True)
class SubsetPartition:
    """Per-symbol split of antenna indices: coherent set I_M, even-destructive
    set E_L, odd-destructive (pi-flipped) set O_L."""

    n_antennas: int
    coherent: tuple[int, ...]
    even_destructive: tuple[int, ...]
    odd_destructive: tuple[int, ...]
    symbol_index: int = 0

    def __post_init__(self):
        i_m, e_l, o_l = set(self.coherent), set(self.even_destructive), set(self.odd_destructive)
        if len(e_l) != len(o_l):
            raise InvalidSubsetSizeError("even/odd destructive sets must have equal size")
        union = i_m | e_l | o_l
        if len(union) != len(self.coherent) + 2 * len(e_l) or union != set(range(self.n_antennas)):
            raise InvalidSubsetSizeError("sets must be disjoint and cover all antenna indices")

    @property
    def subset_size(self) -> int:
        return len(self.coherent)


def validate_subset_size(cfg: ArrayConfig, m: int) -> None:
    if not 1 <= m <= cfg.n_antennas:
        raise InvalidSubsetSizeError(f"subset size must be in [1, {cfg.n_antennas}], got {m}")
    if (cfg.n_antennas - m) % 2 != 0:
        raise InvalidSubsetSizeError(
            f"n_antennas - m must be even so the destructive antennas pair up "
            f"(n_antennas={cfg.n_antennas}, m={m})"
        )


def draw_partition(
    cfg: ArrayConfig, m: int, rng: np.random.Generator, symbol_index: int = 0
) -> SubsetPartition:
    """Uniform random partition: a random permutation's first m indices form
    I_M; the remainder alternates into E_L / O_L. m = n_antennas is the
    degenerate no-jamming case (empty destructive sets)."""
    validate_subset_size(cfg, m)
    perm = rng.permutation(cfg.n_antennas)
    return SubsetPartition(
        n_antennas=cfg.n_antennas,
        coherent=tuple(int(i) for i in perm[:m]),
        even_destructive=tuple(int(i) for i in perm[m::2]),
        odd_destructive=tuple(int(i) for i in perm[m + 1 :: 2]),
        symbol_index=symbol_index,
    )


def sign_vector(part: SubsetPartition) -> np.ndarray:
    """W_n: +1 on the co-phased antennas, -1 on the pi-flipped set."""
    w = np.ones(part.n_antennas)
    w[list(part.odd_destructive)] = -1.0
    return w


def analog_weights(cfg: ArrayConfig, theta_rx: float, part: SubsetPartition) -> np.ndarray:
    """Unit-norm analog beam: entry n is (1/sqrt(N_T)) e^{j Upsilon_n} with the
    beam-steering phase toward theta_rx, plus pi on the odd-destructive set."""
    if part.n_antennas != cfg.n_antennas:
        raise InvalidSubsetSizeError("partition does not match the array size")
    phases = element_phases(cfg, np.cos(theta_rx))
    return sign_vector(part) * np.exp(1j * phases) / np.sqrt(cfg.n_antennas)


def beta(cfg: ArrayConfig, theta: float, theta_rx: float, part: SubsetPartition) -> complex:
    """Far-field gain f(k)^H a(theta) of the subset beam; equals M/sqrt(N_T)
    exactly at theta = theta_rx for every partition."""
    delta = np.cos(theta) - np.cos(theta_rx)
    phasors = np.exp(1j * element_phases(cfg, 1.0) * delta)  # phases are linear in cos
    return complex(sign_vector(part) @ phasors / np.sqrt(cfg.n_antennas))


def pattern_value(cfg: ArrayConfig, weights: np.ndarray, theta: float) -> complex:
    """f^H a(theta), the radiation-pattern value of any beam vector."""
    return complex(np.vdot(weights, steering_vector(cfg, theta)))


@dataclass(frozen=True)
class BetaStats:
    """First and second moments of beta in the IID-sign ensemble."""

    mean: complex
    variance: float
    var_real: float
    var_imag: float


def bernoulli_moments(cfg: ArrayConfig, m: int) -> tuple[float, float]:
    """Mean M/N_T and variance (N_T^2 - M^2)/N_T^2 of the antenna sign W_n."""
    validate_subset_size(cfg, m)
    n = cfg.n_antennas
    return m / n, (n * n - m * m) / (n * n)


def beta_stats_closed_form(cfg: ArrayConfig, m: int, theta: float, theta_rx: float) -> BetaStats:
    """Closed-form moments of beta:

        E[beta]    = (M / (N_T*sqrt(N_T))) * sin(N_T*ups/2) / sin(ups/2)
        var[Re b]  = ((N_T^2-M^2)/(2 N_T^3)) * (N_T + sin(N_T*ups)/sin(ups))
        var[Im b]  = ((N_T^2-M^2)/(2 N_T^3)) * (N_T - sin(N_T*ups)/sin(ups))

    with ups = 2*pi*(d/lambda)*(cos theta - cos theta_rx). The imaginary part
    of the mean vanishes identically; var_real + var_imag equals the total
    (N_T^2 - M^2)/N_T^2 for every angle. At the removable singularity
    ups = 0 the mean is M/sqrt(N_T).
    """
    validate_subset_size(cfg, m)
    n = cfg.n_antennas
    delta = np.cos(theta) - np.cos(theta_rx)
    x = np.pi * cfg.spacing_ratio * delta  # ups/2

    if abs(np.sin(x)) < SIN_SINGULARITY:
        mean = m / np.sqrt(n) * np.cos(n * x) / np.cos(x)
    else:
        mean = (m / (n * np.sqrt(n))) * np.sin(n * x) / np.sin(x)

    _, var_w = bernoulli_moments(cfg, m)
    if abs(np.sin(2 * x)) < SIN_SINGULARITY:
        ratio = n * np.cos(2 * n * x) / np.cos(2 * x)
    else:
        ratio = np.sin(2 * n * x) / np.sin(2 * x)
    scale = var_w / (2.0 * n)
    return BetaStats(
        mean=complex(mean),
        variance=var_w,
        var_real=float(scale * (n + ratio)),
        var_imag=float(scale * (n - ratio)),
    )


def partition_beta_variance(cfg: ArrayConfig, m: int, theta: float, theta_rx: float) -> float:
    """Exact total variance of beta under fixed-count partitions.

    The closed form assumes IID signs; a partition has exactly (N_T-M)/2
    flipped antennas, so the signs are negatively correlated
    (cov = -var/(N_T-1)) and

        var = var_iid * (1 - (u(theta) - N_T) / (N_T*(N_T-1))),

    u the squared Dirichlet ratio. The correction vanishes only where
    u = N_T and drives the variance to 0 at theta -> theta_rx.
    """
    from .arrays import pattern_gain_sq

    _, var_w = bernoulli_moments(cfg, m)
    n = cfg.n_antennas
    u = pattern_gain_sq(cfg, theta, theta_rx)
    return float(var_w * (1.0 - (u - n) / (n * (n - 1.0))))
