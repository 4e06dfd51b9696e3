"""Seeded Monte Carlo experiments for both security techniques.

Reproducibility contract: every routine derives named Philox streams from
(seed, stream-id, grid-position) via :mod:`mmwsec.rng` and draws all trials
in one fixed-shape batch, trial i owning row i. Results are therefore
bit-identical for a given (seed, config) no matter how trials would be split
across parallel lanes; the ``lanes`` field is a scheduling hint only.

Two sign ensembles are available for the subset-jamming statistics:

``"iid-sign"`` (default)
    Antenna signs drawn IID with P(+1) = (N_T+M)/2N_T — the ensemble in which
    every closed form (Lemma-style moments, asymptotic eavesdropper SNR, rate
    bounds) is derived.
``"partition"``
    Exact fixed-count partitions as transmitted (M coherent antennas, equal
    destructive halves). Deviates from the closed forms by the correction
    :func:`mmwsec.subset_jam.partition_beta_variance`; at the receiver angle
    the gain is exactly M/sqrt(N_T) with zero variance.

Rate estimator: within each block of trials the first and second moments of
the artificial-noise term are measured empirically, each trial draws its own
eavesdropper gain (and the per-symbol noise phase for the hybrid technique),
and the clamped instantaneous rates are averaged; the standard error comes
from the spread of block means, so it accounts for moment-estimation noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sstats

from . import rng as rngmod
from .an_precoding import SectorSet, matched_filter, measured_c0, noise_beam
from .arrays import ArrayConfig, Scenario, element_phases
from .hybrid import HybridPrecoder, RfDictionary, build_dictionary, factorize_components, split_rf_budget
from .secrecy import analog_snr_rx, hybrid_secrecy_bound
from .subset_jam import beta_stats_closed_form, pattern_value, validate_subset_size

SIGN_MODELS = ("iid-sign", "partition")


@dataclass(frozen=True)
class McConfig:
    """Trial count, master seed, and a parallelism hint (no numerical effect)."""

    n_trials: int
    seed: int = 12345
    lanes: int = 1

    def __post_init__(self):
        if self.n_trials < 100:
            raise ValueError("n_trials must be >= 100 to report standard errors")
        if self.lanes < 1:
            raise ValueError("lanes must be >= 1")


@dataclass(frozen=True)
class McResult:
    estimate: complex | float
    std_error: float
    n_trials: int
    seed: int
    extras: dict = field(default_factory=dict)


def _n_blocks(n_trials: int) -> int:
    return min(100, max(5, n_trials // 100))


def _sign_matrix(
    cfg: ArrayConfig, m: int, n_trials: int, rng: np.random.Generator, sign_model: str
) -> np.ndarray:
    validate_subset_size(cfg, m)
    n = cfg.n_antennas
    if sign_model == "iid-sign":
        p_plus = (n + m) / (2.0 * n)
        return np.where(rng.random((n_trials, n)) < p_plus, 1.0, -1.0)
    if sign_model == "partition":
        # argsort of uniforms is a uniform permutation; remainder alternates
        perm = np.argsort(rng.random((n_trials, n)), axis=1)
        w = np.ones((n_trials, n))
        w[np.arange(n_trials)[:, None], perm[:, m + 1 :: 2]] = -1.0
        return w
    raise ValueError(f"unknown sign_model {sign_model!r}, expected one of {SIGN_MODELS}")


def _beta_samples(
    cfg: ArrayConfig,
    m: int,
    theta: float,
    theta_rx: float,
    n_trials: int,
    rng: np.random.Generator,
    sign_model: str,
) -> np.ndarray:
    delta = np.cos(theta) - np.cos(theta_rx)
    phasors = np.exp(1j * element_phases(cfg, 1.0) * delta)
    w = _sign_matrix(cfg, m, n_trials, rng, sign_model)
    return (w @ phasors) / np.sqrt(cfg.n_antennas)


def _ev_power_gains(scn: Scenario, n_trials: int, rng: np.random.Generator) -> np.ndarray:
    """|g_E|^2 per trial: exponential(1) for CN(0,1) gains, constant otherwise."""
    if scn.ev_gain_model == "gaussian":
        z = rng.standard_normal((n_trials, 2))
        return (z[:, 0] ** 2 + z[:, 1] ** 2) / 2.0
    return np.full(n_trials, abs(scn.ev_gain) ** 2)


def mc_beta_moments(
    cfg: ArrayConfig,
    m: int,
    theta: float,
    theta_rx: float,
    mc: McConfig,
    sign_model: str = "iid-sign",
) -> tuple[McResult, McResult]:
    """Sample mean and total variance of the far-field gain beta.

    The mean result's extras carry per-component standard errors (se_real,
    se_imag); the variance result's extras carry the component variances.
    """
    rng = rngmod.stream(mc.seed, rngmod.PARTITION)
    b = _beta_samples(cfg, m, theta, theta_rx, mc.n_trials, rng, sign_model)
    n = mc.n_trials
    mean = complex(b.mean())
    var_re = float(np.var(b.real, ddof=1))
    var_im = float(np.var(b.imag, ddof=1))
    mean_res = McResult(
        estimate=mean,
        std_error=float(np.sqrt((var_re + var_im) / n)),
        n_trials=n,
        seed=mc.seed,
        extras={
            "se_real": float(np.sqrt(var_re / n)),
            "se_imag": float(np.sqrt(var_im / n)),
            "sign_model": sign_model,
        },
    )
    dev_sq = np.abs(b - mean) ** 2
    var_total = float(var_re + var_im)
    var_res = McResult(
        estimate=var_total,
        std_error=float(np.std(dev_sq, ddof=1) / np.sqrt(n)),
        n_trials=n,
        seed=mc.seed,
        extras={"var_real": var_re, "var_imag": var_im, "sign_model": sign_model},
    )
    return mean_res, var_res


@dataclass(frozen=True)
class BetaCdfResult:
    """Sorted samples of Re/Im beta with KS distances against the normal CDFs
    parameterized by the closed-form component moments."""

    real_sorted: np.ndarray
    imag_sorted: np.ndarray
    ks_real: float
    ks_imag: float
    closed_form_mean: complex
    closed_form_var_real: float
    closed_form_var_imag: float
    imag_mean: McResult


def mc_beta_cdf(
    cfg: ArrayConfig,
    m: int,
    theta: float,
    theta_rx: float,
    mc: McConfig,
    sign_model: str = "iid-sign",
) -> BetaCdfResult:
    if mc.n_trials < 10_000:
        raise ValueError("KS reporting needs n_trials >= 10000")
    rng = rngmod.stream(mc.seed, rngmod.PARTITION)
    b = _beta_samples(cfg, m, theta, theta_rx, mc.n_trials, rng, sign_model)
    cf = beta_stats_closed_form(cfg, m, theta, theta_rx)
    ks_real = sstats.kstest(b.real, "norm", args=(cf.mean.real, np.sqrt(cf.var_real))).statistic
    ks_imag = sstats.kstest(b.imag, "norm", args=(0.0, np.sqrt(cf.var_imag))).statistic
    imag_mean = McResult(
        estimate=float(b.imag.mean()),
        std_error=float(b.imag.std(ddof=1) / np.sqrt(mc.n_trials)),
        n_trials=mc.n_trials,
        seed=mc.seed,
    )
    return BetaCdfResult(
        real_sorted=np.sort(b.real),
        imag_sorted=np.sort(b.imag),
        ks_real=float(ks_real),
        ks_imag=float(ks_imag),
        closed_form_mean=cf.mean,
        closed_form_var_real=cf.var_real,
        closed_form_var_imag=cf.var_imag,
        imag_mean=imag_mean,
    )


def _block_slices(n_trials: int, n_blocks: int) -> list[slice]:
    edges = np.linspace(0, n_trials, n_blocks + 1).astype(int)
    return [slice(a, b) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def mc_secrecy_analog(
    scn: Scenario,
    cfg: ArrayConfig,
    m: int,
    theta_grid: np.ndarray,
    mc: McConfig,
    sign_model: str = "iid-sign",
) -> list[McResult]:
    """Simulated secrecy rate of the subset-jamming technique per grid angle.

    Per trial: a fresh sign draw contributes to the block's empirical moments
    of beta, the eavesdropper gain is drawn, the instantaneous clamped rate is
    formed from the measured beamforming gain and noise power. m = n_antennas
    is the conventional full-array baseline (no artificial noise).
    """
    snr_rx = analog_snr_rx(scn, cfg, m)
    results = []
    a_scale = scn.tx_power * scn.path_loss_ev * scn.n_ev_antennas
    slices = _block_slices(mc.n_trials, _n_blocks(mc.n_trials))
    for idx, theta in enumerate(np.asarray(theta_grid, dtype=float)):
        rng_b = rngmod.stream(mc.seed, rngmod.PARTITION, idx)
        rng_g = rngmod.stream(mc.seed, rngmod.EV_GAIN, idx)
        b = _beta_samples(cfg, m, theta, scn.theta_rx, mc.n_trials, rng_b, sign_model)
        gains = a_scale * _ev_power_gains(scn, mc.n_trials, rng_g)
        block_means = []
        for sl in slices:
            bb = b[sl]
            n_b = bb.size
            mean_b = bb.mean()
            var_b = float(np.sum(np.abs(bb - mean_b) ** 2) / (n_b - 1))
            # |mean_b|^2 is biased up by var/n_b; the signed correction keeps
            # pattern nulls at zero signal in expectation (>= -1/n_b, log-safe)
            sig_b = abs(mean_b) ** 2 - var_b / n_b
            a_pow = gains[sl]
            snr_ev = a_pow * sig_b / (a_pow * var_b + scn.noise_ev)
            rates = np.maximum(np.log2(1.0 + snr_rx) - np.log2(1.0 + snr_ev), 0.0)
            block_means.append(rates.mean())
        block_means = np.asarray(block_means)
        at_rx = abs(np.cos(theta) - np.cos(scn.theta_rx)) < 1e-12
        results.append(
            McResult(
                estimate=float(block_means.mean()),
                std_error=float(block_means.std(ddof=1) / np.sqrt(len(block_means))),
                n_trials=mc.n_trials,
                seed=mc.seed,
                extras={"theta": float(theta), "at_receiver_angle": at_rx, "sign_model": sign_model},
            )
        )
    return results


@dataclass(frozen=True)
class HybridSweepResult:
    """Digital and (optionally) hybrid-architecture rate curves over a sweep
    of either the power split or the eavesdropper angle."""

    x: np.ndarray                      # epsilon values or angles (radians)
    sweep: str                         # "epsilon" | "theta"
    digital: list[McResult]
    hybrid: list[McResult] | None
    c0: float
    f_s: np.ndarray
    f_n: np.ndarray
    hp_s: HybridPrecoder | None
    hp_n: HybridPrecoder | None


def _rate_blocks(
    snr_rx_symbols: np.ndarray,
    signal_gain: float,
    an_samples: np.ndarray,
    ev_gains: np.ndarray,
    epsilon: float,
    noise_ev: float,
    slices: list[slice],
) -> tuple[float, float]:
    """Block-averaged clamped rate for one architecture at one sweep point."""
    block_means = []
    for sl in slices:
        gamma_rx = float(snr_rx_symbols[sl].mean())
        an = an_samples[sl]
        var_an = float(np.sum(np.abs(an - an.mean()) ** 2) / (an.size - 1))
        a_pow = ev_gains[sl]
        snr_ev = a_pow * epsilon * signal_gain / (a_pow * var_an + noise_ev)
        rates = np.maximum(np.log2(1.0 + gamma_rx) - np.log2(1.0 + snr_ev), 0.0)
        block_means.append(rates.mean())
    bm = np.asarray(block_means)
    return float(bm.mean()), float(bm.std(ddof=1) / np.sqrt(len(bm)))


def mc_secrecy_hybrid(
    scn: Scenario,
    cfg: ArrayConfig,
    sectors: SectorSet,
    mc: McConfig,
    epsilon_grid: np.ndarray | None = None,
    theta_grid: np.ndarray | None = None,
    epsilon: float | None = None,
    theta: float | None = None,
    n_rf: int | None = None,
    n_directions: int = 360,
    dictionary: RfDictionary | None = None,
) -> HybridSweepResult:
    """Noise-injection technique: design once, simulate per-symbol noise
    phases and eavesdropper gains, report digital (and hybrid, when n_rf is
    given) rate curves.

    Sweeps either epsilon_grid at a fixed eavesdropper angle theta, or
    theta_grid at a fixed epsilon. Draws are shared across sweep points
    (paired comparison). Each digital McResult's extras carry the
    closed-form lower bound evaluated with the designed noise beam
    ("rate_lower_bound") and the receiver's noise-phase-attributable variance
    ratio ("rx_eta_variance_ratio").
    """
    if (epsilon_grid is None) == (theta_grid is None):
        raise ValueError("provide exactly one of epsilon_grid or theta_grid")
    if epsilon_grid is not None and theta is None:
        raise ValueError("an epsilon sweep needs the eavesdropper angle theta")
    if theta_grid is not None and epsilon is None:
        raise ValueError("a theta sweep needs the power fraction epsilon")

    f_s = matched_filter(cfg, scn.theta_rx)
    f_n = noise_beam(cfg, scn.theta_rx, sectors, n_directions)
    c0 = measured_c0(cfg, f_n, sectors, n_directions)

    hp_s = hp_n = None
    if n_rf is not None:
        if dictionary is None:
            dictionary = build_dictionary(cfg, switching=True)
        hp_s, hp_n = factorize_components(
            f_s, f_n, 0.5, dictionary, n_rf, split=split_rf_budget(n_rf, 0.5)
        )

    # shared per-trial draws: noise phase eta and eavesdropper power gain
    eta = np.exp(1j * rngmod.stream(mc.seed, rngmod.NOISE_PHASE).uniform(0, 2 * np.pi, mc.n_trials))
    ev_gains_base = _ev_power_gains(scn, mc.n_trials, rngmod.stream(mc.seed, rngmod.EV_GAIN))
    a_scale = scn.tx_power * scn.path_loss_ev * scn.n_ev_antennas
    ev_gains = a_scale * ev_gains_base
    rx_scale = scn.tx_power * scn.path_loss_rx * scn.n_rx_antennas * abs(scn.rx_gain) ** 2
    slices = _block_slices(mc.n_trials, _n_blocks(mc.n_trials))

    def pattern(vec: np.ndarray, angle: float) -> complex:
        return pattern_value(cfg, vec, angle)

    sweep = "epsilon" if epsilon_grid is not None else "theta"
    xs = np.asarray(epsilon_grid if sweep == "epsilon" else theta_grid, dtype=float)

    digital: list[McResult] = []
    hybrid_res: list[McResult] | None = [] if n_rf is not None else None
    gs_rx_d = pattern(f_s, scn.theta_rx)
    gn_rx_d = pattern(f_n, scn.theta_rx)
    if n_rf is not None:
        gs_rx_h = pattern(hp_s.reconstructed, scn.theta_rx)
        gn_rx_h = pattern(hp_n.reconstructed, scn.theta_rx)
        cross_h = complex(np.vdot(hp_s.reconstructed, hp_n.reconstructed))

    for x in xs:
        eps = float(x) if sweep == "epsilon" else float(epsilon)
        th = float(theta) if sweep == "epsilon" else float(x)

        gs_ev_d, gn_ev_d = pattern(f_s, th), pattern(f_n, th)
        # digital receiver samples: sqrt(eps) a^H f_s + sqrt(1-eps) a^H f_n eta
        amp_rx = np.sqrt(eps) * gs_rx_d + np.sqrt(1 - eps) * gn_rx_d * eta
        snr_rx_sym = rx_scale * np.abs(amp_rx) ** 2 / scn.noise_rx
        an_ev = np.sqrt(1 - eps) * gn_ev_d * eta
        est, se = _rate_blocks(
            snr_rx_sym, abs(gs_ev_d) ** 2, an_ev, ev_gains, eps, scn.noise_ev, slices
        )
        mean_pow = float(np.mean(np.abs(amp_rx) ** 2))
        var_amp = float(np.mean(np.abs(amp_rx - amp_rx.mean()) ** 2))
        bound = hybrid_secrecy_bound(scn, cfg, eps, th, sectors, c0, f_n=f_n)
        digital.append(
            McResult(
                estimate=est,
                std_error=se,
                n_trials=mc.n_trials,
                seed=mc.seed,
                extras={
                    "epsilon": eps,
                    "theta": th,
                    "rate_lower_bound": bound.rate_lower_bound,
                    "rx_eta_variance_ratio": var_amp / mean_pow if mean_pow > 0 else 0.0,
                },
            )
        )

        if n_rf is not None:
            gs_ev_h, gn_ev_h = pattern(hp_s.reconstructed, th), pattern(hp_n.reconstructed, th)
            # per-symbol renormalization of the combined factorized beams
            norm_sq = 1.0 + 2.0 * np.sqrt(eps * (1 - eps)) * np.real(eta * cross_h)
            norm = np.sqrt(norm_sq)
            amp_rx_h = (np.sqrt(eps) * gs_rx_h + np.sqrt(1 - eps) * gn_rx_h * eta) / norm
            snr_rx_sym_h = rx_scale * np.abs(amp_rx_h) ** 2 / scn.noise_rx
            # signal and AN components at the eavesdropper, same normalization
            sig_h = np.sqrt(eps) * gs_ev_h / norm
            an_h = np.sqrt(1 - eps) * gn_ev_h * eta / norm
            sig_pow_h = float(np.mean(np.abs(sig_h) ** 2))
            est_h, se_h = _rate_blocks(
                snr_rx_sym_h, sig_pow_h, an_h, ev_gains, 1.0, scn.noise_ev, slices
            )
            hybrid_res.append(
                McResult(
                    estimate=est_h,
                    std_error=se_h,
                    n_trials=mc.n_trials,
                    seed=mc.seed,
                    extras={"epsilon": eps, "theta": th},
                )
            )

    return HybridSweepResult(
        x=xs,
        sweep=sweep,
        digital=digital,
        hybrid=hybrid_res,
        c0=c0,
        f_s=f_s,
        f_n=f_n,
        hp_s=hp_s,
        hp_n=hp_n,
    )
