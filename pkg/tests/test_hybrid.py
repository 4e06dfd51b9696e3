import numpy as np
import pytest

from mmwsec import (
    ArrayConfig,
    DictionaryOverflowError,
    SectorSet,
    build_dictionary,
    combined_precoder,
    factorize_components,
    hybrid_symbol,
    matched_filter,
    noise_beam,
    omp_factorize,
    pattern_value,
    split_rf_budget,
    steering_vector,
)


def test_dictionary_column_counts():
    cfg = ArrayConfig(n_antennas=16, phase_bits=6, group_size=8)
    assert build_dictionary(cfg, switching=True).n_columns == 3 * 64
    assert build_dictionary(cfg, switching=False).n_columns == 64
    fig6 = ArrayConfig(n_antennas=32, phase_bits=8, group_size=8)
    assert build_dictionary(fig6, switching=True).n_columns == 15 * 256


def test_dictionary_column_structure():
    cfg = ArrayConfig(n_antennas=16, phase_bits=3, group_size=4)
    d = build_dictionary(cfg, switching=True)
    mags = np.abs(d.columns)
    # every entry is either zero (switched off) or unit modulus
    assert np.all((mags < 1e-12) | (np.abs(mags - 1.0) < 1e-12))
    assert not np.any(np.all(mags < 1e-12, axis=0))  # no all-zero column
    # masks act on whole contiguous groups
    per_group = mags.reshape(4, 4, -1)
    assert np.all(np.ptp(per_group, axis=1) < 1e-12)
    # angle-major ordering: first (2^4 - 1) columns share the first angle
    assert np.allclose(d.angles[:15], d.angles[0])


def test_dictionary_overflow_guard():
    cfg = ArrayConfig(n_antennas=32, phase_bits=6, group_size=1)
    with pytest.raises(DictionaryOverflowError):
        build_dictionary(cfg, switching=True)


def test_dictionary_group_permutation():
    cfg = ArrayConfig(n_antennas=8, phase_bits=2, group_size=4)
    perm = np.array([0, 2, 4, 6, 1, 3, 5, 7])
    d = build_dictionary(cfg, switching=True, group_permutation=perm)
    # group 0 is now the even antennas: a column with group 1 off is zero there
    mags = np.abs(d.columns)
    col = mags[:, 0]  # mask 0b01: only group 0 on
    assert np.all(col[perm[:4]] > 0.9) and np.all(col[perm[4:]] < 1e-12)


def test_omp_recovers_single_column():
    cfg = ArrayConfig(n_antennas=16, phase_bits=5, group_size=8)
    d = build_dictionary(cfg, switching=True)
    target = d.columns[:, 37] / np.linalg.norm(d.columns[:, 37])
    hp = omp_factorize(target, d, 1)
    assert hp.residual_norm <= 1e-10
    assert hp.selected == (37,)
    assert np.linalg.norm(hp.rf_matrix @ hp.baseband) == pytest.approx(1.0, abs=1e-10)


def test_omp_residual_monotone_in_chain_count():
    cfg = ArrayConfig(n_antennas=16, phase_bits=4, group_size=8)
    d = build_dictionary(cfg, switching=True)
    rng = np.random.default_rng(12)
    for _ in range(6):
        t = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        t /= np.linalg.norm(t)
        prev = np.inf
        for n_rf in range(1, 9):
            r = omp_factorize(t, d, n_rf).residual_norm
            assert r <= prev + 1e-12
            prev = r


def test_omp_unit_power_constraint():
    cfg = ArrayConfig(n_antennas=16, phase_bits=4, group_size=8)
    d = build_dictionary(cfg, switching=True)
    rng = np.random.default_rng(5)
    t = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    hp = omp_factorize(t / np.linalg.norm(t), d, 4)
    assert np.linalg.norm(hp.reconstructed) == pytest.approx(1.0, abs=1e-10)


def test_omp_collision_skips_to_next_column():
    cfg = ArrayConfig(n_antennas=4, phase_bits=1)
    d = build_dictionary(cfg, switching=False)  # two columns
    target = d.columns[:, 0] / 2.0
    hp = omp_factorize(target, d, 2)
    assert hp.collision
    assert sorted(hp.selected) == [0, 1]


def test_split_rf_budget():
    assert split_rf_budget(10, 0.5) == (5, 5)
    assert split_rf_budget(10, 1.0) == (10, 0)
    assert split_rf_budget(10, 0.0) == (0, 10)
    with pytest.raises(ValueError):
        split_rf_budget(1, 0.5)


def test_factorize_components_exact_columns():
    # orthogonal quantized-angle steering vectors factorize exactly, so the
    # per-symbol reconstruction equals the digital combined precoder
    cfg = ArrayConfig(n_antennas=4, phase_bits=2)
    d = build_dictionary(cfg, switching=False)  # angles {0, 90, 180, 270} deg
    f_s = steering_vector(cfg, 0.0) / 2.0
    f_n = steering_vector(cfg, np.pi / 2) / 2.0
    assert abs(np.vdot(f_s, f_n)) < 1e-12
    hp_s, hp_n = factorize_components(f_s, f_n, 0.5, d, 2)
    assert hp_s.residual_norm <= 1e-10 and hp_n.residual_norm <= 1e-10
    for k in (0, 1, 4):
        digital = combined_precoder(f_s, f_n, 0.3, k, seed=21)
        phase = np.angle(np.vdot(f_n, digital - np.sqrt(0.3) * f_s))
        recon = hybrid_symbol(hp_s, hp_n, 0.3, phase)
        assert np.allclose(recon, digital, atol=1e-10)


def test_factorize_components_epsilon_one():
    cfg = ArrayConfig(n_antennas=16, phase_bits=5, group_size=8)
    d = build_dictionary(cfg, switching=True)
    theta_rx = np.radians(100.0)
    f_s = matched_filter(cfg, theta_rx)
    f_n = noise_beam(cfg, theta_rx, SectorSet.omni_excluding(theta_rx))
    hp_s, hp_n = factorize_components(f_s, f_n, 1.0, d, 4)
    assert hp_n is None
    out = hybrid_symbol(hp_s, hp_n, 1.0, 0.7)
    assert np.allclose(out, hp_s.reconstructed, atol=1e-12)


def test_factorized_receiver_gain_tracks_digital():
    # Fig-7 architecture: hybrid pattern within 1 dB of digital at the receiver
    cfg = ArrayConfig(n_antennas=32, n_rf=10, phase_bits=6, group_size=8)
    theta_rx = np.radians(120.0)
    f_s = matched_filter(cfg, theta_rx)
    f_n = noise_beam(cfg, theta_rx, SectorSet.omni_excluding(theta_rx))
    d = build_dictionary(cfg, switching=True)
    hp_s, hp_n = factorize_components(f_s, f_n, 0.5, d, 10)
    for k in range(4):
        phase = 2 * np.pi * k / 4.0
        f_h = hybrid_symbol(hp_s, hp_n, 0.5, phase)
        dig = combined_precoder(f_s, f_n, 0.5, 0, seed=0)
        g_h = abs(pattern_value(cfg, f_h, theta_rx)) ** 2
        g_d = abs(pattern_value(cfg, dig, theta_rx)) ** 2
        assert abs(10 * np.log10(g_h / g_d)) <= 1.0


def test_factorize_rejects_non_orthogonal():
    cfg = ArrayConfig(n_antennas=8, phase_bits=3)
    d = build_dictionary(cfg, switching=False)
    f = matched_filter(cfg, 1.0)
    with pytest.raises(ValueError):
        factorize_components(f, f, 0.5, d, 2)
