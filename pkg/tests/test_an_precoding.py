import math

import numpy as np
import pytest

from mmwsec import (
    ArrayConfig,
    CombinedPrecoder,
    DegenerateSectorsError,
    MultisectorSector,
    NonOrthogonalInputsError,
    SectorSet,
    SingularGramError,
    combined_precoder,
    design_noise_beam,
    dirichlet_ratio,
    householder_complement,
    matched_filter,
    measured_c0,
    multisector_precoder,
    noise_beam,
    pattern_value,
    steering_vector,
)

FIG6_SECTORS = SectorSet(intervals=((0.0, np.radians(60.0)), (np.radians(120.0), np.pi)))


def test_matched_filter_gain():
    cfg = ArrayConfig(n_antennas=32)
    theta_rx = np.radians(110.0)
    f_s = matched_filter(cfg, theta_rx)
    assert np.linalg.norm(f_s) == pytest.approx(1.0, abs=1e-12)
    assert abs(pattern_value(cfg, f_s, theta_rx)) ** 2 == pytest.approx(32.0, rel=1e-12)


def test_matched_filter_offaxis_gain_closed_form():
    # |a(theta)^H f_s| equals the Dirichlet ratio over sqrt(N_T); cross-checked
    # against direct summation
    cfg = ArrayConfig(n_antennas=32)
    theta, theta_rx = np.radians(110.0), np.radians(120.0)
    f_s = matched_filter(cfg, theta_rx)
    got = abs(pattern_value(cfg, f_s, theta))
    delta = np.cos(theta) - np.cos(theta_rx)
    closed = abs(dirichlet_ratio(32, 0.5, delta)) / np.sqrt(32)
    direct = abs(
        sum(
            np.exp(1j * (15.5 - n) * 2 * np.pi * 0.5 * delta)
            for n in range(32)
        )
    ) / np.sqrt(32)
    assert got == pytest.approx(closed, rel=1e-10)
    assert got == pytest.approx(direct, rel=1e-10)


def test_householder_projector():
    cfg = ArrayConfig(n_antennas=16)
    theta_rx = np.radians(80.0)
    b = householder_complement(cfg, theta_rx)
    a = steering_vector(cfg, theta_rx)
    assert np.linalg.norm(b @ a) <= 1e-10
    assert np.allclose(b @ b, b, atol=1e-10)
    assert np.allclose(b, b.conj().T, atol=1e-12)
    assert np.trace(b).real == pytest.approx(15.0, abs=1e-10)


def test_noise_beam_orthogonal_unit_norm():
    cfg = ArrayConfig(n_antennas=32)
    theta_rx = np.radians(90.0)
    f_n = noise_beam(cfg, theta_rx, FIG6_SECTORS)
    assert np.linalg.norm(f_n) == pytest.approx(1.0, abs=1e-10)
    assert abs(np.vdot(steering_vector(cfg, theta_rx), f_n)) <= 1e-8


def test_noise_beam_sector_selectivity():
    # mean in-sector gain beats the far-out-of-sector mean by >= 6 dB
    cfg = ArrayConfig(n_antennas=32)
    theta_rx = np.radians(90.0)
    f_n = noise_beam(cfg, theta_rx, FIG6_SECTORS, n_directions=360)
    thetas = np.radians(np.arange(0.0, 180.5, 0.5))
    pattern = np.array([abs(pattern_value(cfg, f_n, t)) ** 2 for t in thetas])
    in_t = FIG6_SECTORS.contains(thetas)
    out_t = ~in_t & (np.abs(thetas - theta_rx) > np.radians(10.0))
    assert 10 * np.log10(pattern[in_t].mean() / pattern[out_t].mean()) >= 6.0


def test_noise_beam_rejects_degenerate():
    cfg = ArrayConfig(n_antennas=16)
    with pytest.raises(DegenerateSectorsError):
        noise_beam(cfg, 1.0, FIG6_SECTORS, n_directions=12)  # grid too coarse
    with pytest.raises(DegenerateSectorsError):
        # guard band eats the single one-step sector at theta_rx
        tiny = SectorSet(intervals=((np.radians(89.9), np.radians(90.1)),))
        noise_beam(cfg, np.radians(90.0), tiny)


def test_sector_set_validation():
    with pytest.raises(DegenerateSectorsError):
        SectorSet(intervals=((0.5, 0.4),))
    with pytest.raises(DegenerateSectorsError):
        SectorSet(intervals=((0.1, 0.6), (0.5, 0.9)))
    with pytest.raises(DegenerateSectorsError):
        SectorSet(intervals=())
    omni = SectorSet.omni_excluding(np.radians(120.0))
    assert not omni.contains(np.radians(120.0))
    assert omni.contains(np.radians(30.0))
    assert omni.measure == pytest.approx(np.pi - np.radians(2.0), abs=1e-12)
    around = SectorSet.around(np.radians(120.0), np.radians(30.0))
    assert around.measure == pytest.approx(np.radians(58.0), abs=1e-12)
    assert around.contains(np.radians(110.0)) and not around.contains(np.radians(80.0))


def test_residual_rms_non_increasing_with_grid_density():
    cfg = ArrayConfig(n_antennas=16)
    theta_rx = np.radians(95.0)
    res = [
        design_noise_beam(cfg, theta_rx, FIG6_SECTORS, n_directions=n).residual_rms
        for n in (360, 720, 1440)
    ]
    assert res[0] >= res[1] - 1e-9
    assert res[1] >= res[2] - 1e-9


def test_combined_precoder_extremes():
    cfg = ArrayConfig(n_antennas=32)
    theta_rx = np.radians(120.0)
    f_s = matched_filter(cfg, theta_rx)
    f_n = noise_beam(cfg, theta_rx, SectorSet.omni_excluding(theta_rx))
    f1 = combined_precoder(f_s, f_n, 1.0, 0, seed=1)
    assert np.allclose(f1, f_s, atol=1e-15)
    f0 = combined_precoder(f_s, f_n, 0.0, 3, seed=1)
    assert abs(pattern_value(cfg, f0, theta_rx)) <= 1e-8


def test_combined_precoder_power_split():
    # |a(theta_rx)^H f(k)|^2 = eps * N_T for every symbol and split
    cfg = ArrayConfig(n_antennas=32)
    theta_rx = np.radians(120.0)
    pre = CombinedPrecoder(
        f_s=matched_filter(cfg, theta_rx),
        f_n=noise_beam(cfg, theta_rx, SectorSet.omni_excluding(theta_rx)),
        epsilon=0.0,
        noise_phase_seed=7,
    )
    for eps in np.arange(0.0, 1.01, 0.1):
        pre2 = CombinedPrecoder(pre.f_s, pre.f_n, float(eps), 7)
        for k in (0, 5, 11):
            f_k = pre2.symbol(k)
            assert np.linalg.norm(f_k) == pytest.approx(1.0, abs=1e-10)
            got = abs(pattern_value(cfg, f_k, theta_rx)) ** 2
            if eps == 0.0:
                assert got <= 1e-8
            else:
                assert got == pytest.approx(eps * 32.0, rel=1e-8)


def test_combined_precoder_receiver_invariance():
    # the receiver never sees the per-symbol phase; other directions do
    cfg = ArrayConfig(n_antennas=32)
    theta_rx = np.radians(120.0)
    sectors = SectorSet.omni_excluding(theta_rx)
    pre = CombinedPrecoder(
        matched_filter(cfg, theta_rx), noise_beam(cfg, theta_rx, sectors), 0.5, 3
    )
    at_rx, at_60 = [], []
    for k in range(2000):
        f_k = pre.symbol(k)
        at_rx.append(pattern_value(cfg, f_k, theta_rx))
        at_60.append(pattern_value(cfg, f_k, np.radians(60.0)))
    assert np.var(np.asarray(at_rx)) <= 1e-16
    assert np.var(np.asarray(at_60)) > 1e-4


def test_combined_precoder_rejects_non_orthogonal():
    cfg = ArrayConfig(n_antennas=8)
    f_s = matched_filter(cfg, np.radians(100.0))
    with pytest.raises(NonOrthogonalInputsError):
        combined_precoder(f_s, f_s, 0.5, 0, seed=0)


def test_measured_c0_reported():
    cfg = ArrayConfig(n_antennas=32)
    theta_rx = np.radians(120.0)
    sectors = SectorSet.around(theta_rx, np.radians(30.0))
    c0 = measured_c0(cfg, noise_beam(cfg, theta_rx, sectors), sectors)
    assert 0.0 < c0 < 2.0


TWO_SECTORS = (
    MultisectorSector(lo=np.radians(26.0), hi=np.radians(35.0), power_fraction=0.5, receiver=True),
    MultisectorSector(lo=np.radians(146.0), hi=np.radians(155.0), power_fraction=0.5, receiver=True),
)


def test_multisector_two_receiver_sectors_pattern():
    # draft figure setup: broadcast to two 10-degree sectors, N_T = 16
    cfg = ArrayConfig(n_antennas=16, n_rf=2, phase_bits=2)
    design = multisector_precoder(cfg, TWO_SECTORS, np.random.default_rng(0))
    assert np.linalg.norm(design.weights) == pytest.approx(1.0, abs=1e-10)
    thetas = np.radians(np.arange(0.0, 180.5, 0.5))
    pattern = np.array([abs(pattern_value(cfg, design.weights, t)) ** 2 for t in thetas])
    in1 = (thetas >= np.radians(26.0)) & (thetas <= np.radians(35.0))
    in2 = (thetas >= np.radians(146.0)) & (thetas <= np.radians(155.0))
    outside = ~in1 & ~in2
    assert pattern[in1].max() > pattern[outside].max()
    assert pattern[in2].max() > pattern[outside].max()


def test_multisector_deterministic_receiver_amplitudes():
    cfg = ArrayConfig(n_antennas=16)
    rng = np.random.default_rng(1)
    amp0 = multisector_precoder(cfg, TWO_SECTORS, rng).amplitudes
    amp1 = multisector_precoder(cfg, TWO_SECTORS, rng).amplitudes
    assert amp0 == amp1 == (pytest.approx(math.sqrt(0.5)),) * 2


def test_multisector_jam_amplitude_variance():
    # random sector amplitudes x*sqrt(alpha): sample variance matches alpha
    cfg = ArrayConfig(n_antennas=8)
    sectors = (
        MultisectorSector(lo=np.radians(40.0), hi=np.radians(60.0), power_fraction=0.6, receiver=True),
        MultisectorSector(lo=np.radians(100.0), hi=np.radians(130.0), power_fraction=0.4, receiver=False),
    )
    rng = np.random.default_rng(2)
    draws = np.array(
        [multisector_precoder(cfg, sectors, rng, n_directions=90).amplitudes for _ in range(10_000)]
    )
    assert np.ptp(draws[:, 0]) == 0.0  # receiver amplitude fixed across draws
    var = draws[:, 1].var()
    se = 0.4 * math.sqrt(2.0 / 10_000)
    assert abs(var - 0.4) < 4 * se


def test_multisector_full_circle_single_sector():
    cfg = ArrayConfig(n_antennas=8)
    whole = (MultisectorSector(lo=0.0, hi=np.pi, power_fraction=1.0, receiver=True),)
    d0 = multisector_precoder(cfg, whole, np.random.default_rng(0))
    d1 = multisector_precoder(cfg, whole, np.random.default_rng(99))
    assert np.allclose(d0.weights, d1.weights)  # no random component
    assert d0.residual_norm == pytest.approx(d1.residual_norm)
    assert d0.residual_norm > 0.0  # constant target is not in the span


def test_multisector_power_fractions_must_sum_to_one():
    cfg = ArrayConfig(n_antennas=8)
    bad = (MultisectorSector(lo=0.1, hi=0.5, power_fraction=0.7, receiver=True),)
    with pytest.raises(ValueError):
        multisector_precoder(cfg, bad, np.random.default_rng(0))


def test_multisector_singular_gram():
    cfg = ArrayConfig(n_antennas=16)
    with pytest.raises(SingularGramError):
        multisector_precoder(cfg, TWO_SECTORS, np.random.default_rng(0), n_directions=8)
